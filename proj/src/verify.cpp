#include "jacksim/verify.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "jacksim/format.hpp"
#include "jacksim/parallel.hpp"
#include "jacksim/rbm.hpp"
#include "jacksim/stats.hpp"

namespace jacksim {

namespace {

// net-path and rbm-path stream tags under the root seed
constexpr std::uint64_t kNetStream = 1;
constexpr std::uint64_t kRbmStream = 2;

// Central quantile grid: the tails of an empirical quantile function are too
// noisy at feasible replication counts to carry a growth-rate regression.
const double kQuantileGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// Mean absolute gap between empirical quantile functions over the central
// grid: the per-marginal transport distance the two ensembles cannot avoid.
double quantile_dist(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double acc = 0.0;
    int n = 0;
    for (double p : kQuantileGrid) {
        acc += std::abs(quantile_sorted(a, p) - quantile_sorted(b, p));
        ++n;
    }
    return acc / n;
}

}  // namespace

ScalingReport scaled_compare(const NetworkSpec& spec, const RbmParams& params, double T,
                             const std::vector<double>& scales, int reps, std::uint64_t seed,
                             const ScaleOptions& opts) {
    if (!(T > 0.0) || reps < 2 || scales.empty())
        throw std::invalid_argument("scaled_compare: need T > 0, reps >= 2, scales nonempty");
    for (double n : scales)
        if (!(n > 0.0)) throw std::invalid_argument("scaled_compare: scales must be > 0");

    const int k = spec.num_stations;
    const int chk = opts.checkpoints;
    const EnvDerived envd = env_derived(spec);
    Vec intensity;
    Mat cov;
    analytic_lv(spec.arrival, &intensity, &cov);
    const TrafficSolution traffic = solve_traffic(spec, envd, intensity);
    const Vec q0 = spec.initial_queue_or_zero().cast<double>();

    ScalingReport report;
    report.T = T;
    report.root_seed = seed;
    report.reps = reps;

    for (std::size_t si = 0; si < scales.size(); ++si) {
        const double n = scales[si];
        const double horizon = n * T;
        const double root_n = std::sqrt(n);

        // net[c][j][r], rbm[c][j][r]: queue ensembles at checkpoint c (unscaled units)
        std::vector<std::vector<std::vector<double>>> net(
            chk, std::vector<std::vector<double>>(k, std::vector<double>(reps)));
        auto rbm = net;
        std::vector<double> c_resid(reps * k), s_resid(reps * k);

        parallel_for(reps, opts.threads, [&](long r) {
            SimPath path = simulate(spec, horizon, horizon / chk,
                                    derive_seed(seed, {kNetStream, si, static_cast<std::uint64_t>(r)}));
            for (int c = 0; c < chk; ++c) {
                for (int j = 0; j < k; ++j)
                    net[c][j][r] = static_cast<double>(path.queue(c + 1, j));
            }
            const long last = static_cast<long>(path.times.size()) - 1;
            for (int j = 0; j < k; ++j) {
                const StationSpec& st = spec.stations[j];
                c_resid[r * k + j] =
                    std::abs(path.on_time(last, j) / horizon - envd.on_fraction[j]);
                s_resid[r * k + j] =
                    std::abs(static_cast<double>(path.saturated(last, j)) / horizon -
                             st.service_rate * envd.on_fraction[j]);
            }
        });

        const long steps = static_cast<long>(std::ceil(T / opts.rbm_dt - 1e-9));
        const double dt = T / static_cast<double>(steps);
        parallel_for(reps, opts.threads, [&](long r) {
            DrivingPath w = sample_brownian(root_n * params.drift, params.covariance, q0 / root_n,
                                            steps, dt,
                                            derive_seed(seed, {kRbmStream, si, static_cast<std::uint64_t>(r)}));
            ReflectedPath z = reflect(w, Mat::Identity(k, k) - params.reflection);
            for (int c = 0; c < chk; ++c) {
                const long gi = std::min<long>(steps, std::lround(static_cast<double>(c + 1) / chk *
                                                                  static_cast<double>(steps)));
                for (int j = 0; j < k; ++j) rbm[c][j][r] = root_n * z.z(gi, j);
            }
        });

        ScaleResult res;
        res.scale = n;
        res.reps = reps;
        res.station_class = traffic.station_class;
        res.ks_at_horizon.resize(k);
        res.sup_ks_dist.setZero(k);
        res.sup_quantile_dist.setZero(k);
        res.sup_mean_dist.setZero(k);
        res.lln_c_resid.setZero(k);
        res.lln_s_resid.setZero(k);
        res.ks_by_checkpoint.setZero(chk, k);
        res.qdist_by_checkpoint.setZero(chk, k);

        for (int j = 0; j < k; ++j) {
            std::vector<double> net_scaled(reps), rbm_scaled(reps);
            for (int r = 0; r < reps; ++r) {
                net_scaled[r] = net[chk - 1][j][r] / root_n;
                rbm_scaled[r] = rbm[chk - 1][j][r] / root_n;
            }
            res.ks_at_horizon[j] = ks_distance(net_scaled, rbm_scaled);
            for (int c = 0; c < chk; ++c) {
                res.ks_by_checkpoint(c, j) = ks_distance(net[c][j], rbm[c][j]);
                res.qdist_by_checkpoint(c, j) = quantile_dist(net[c][j], rbm[c][j]);
                res.sup_ks_dist[j] = std::max(res.sup_ks_dist[j], res.ks_by_checkpoint(c, j));
                res.sup_quantile_dist[j] =
                    std::max(res.sup_quantile_dist[j], res.qdist_by_checkpoint(c, j));
                res.sup_mean_dist[j] = std::max(
                    res.sup_mean_dist[j], std::abs(mean_of(net[c][j]) - mean_of(rbm[c][j])));
            }
            for (int r = 0; r < reps; ++r) {
                res.lln_c_resid[j] += c_resid[r * k + j] / reps;
                res.lln_s_resid[j] += s_resid[r * k + j] / reps;
            }
        }
        report.scales.push_back(std::move(res));
    }
    return report;
}

std::vector<LlnRow> lln_checks(const SimPath& path, const EnvDerived& envd,
                               const NetworkSpec& spec) {
    const int k = spec.num_stations;
    double max_mean_service = 0.0;
    for (const auto& st : spec.stations)
        max_mean_service = std::max(max_mean_service, 1.0 / st.service_rate);
    if (path.horizon < 1e3 * max_mean_service)
        throw std::invalid_argument("lln_checks: horizon must cover >= 1e3 mean service times");

    Vec intensity;
    Mat cov;
    analytic_lv(spec.arrival, &intensity, &cov);
    const TrafficSolution traffic = solve_traffic(spec, envd, intensity);

    const long last = static_cast<long>(path.times.size()) - 1;
    const double t = path.times[last];

    std::vector<LlnRow> rows;
    for (int j = 0; j < k; ++j) {
        const StationSpec& st = spec.stations[j];
        LlnRow row;
        row.station = j;
        row.on_fraction_obs = path.on_time(last, j) / t;
        row.on_fraction_target = envd.on_fraction[j];
        row.on_fraction_thresh = 4.0 * std::sqrt(envd.env_var_rate[j] / t) + 1e-9;

        const double mu = st.service_rate;
        const double sat_rate_var =
            mu * mu * envd.env_var_rate[j] + st.service_var * mu * mu * mu * envd.on_fraction[j];
        double var_proxy = sat_rate_var;
        if (traffic.traffic_coeff[j] < 1.0 - kBottleneckTol) {
            // stable station: realized departures against rho * alpha * mu.
            // Departure fluctuations inherit arrival and routing variability,
            // so the width uses a combined proxy rather than the saturated
            // renewal rate alone.
            std::int64_t departures = 0;
            for (int c = 0; c <= k; ++c) departures += path.routed_count(last, j, c);
            row.service_rate_obs = static_cast<double>(departures) / t;
            row.service_rate_target =
                traffic.traffic_coeff[j] * envd.on_fraction[j] * mu;
            var_proxy = sat_rate_var + cov(j, j) + traffic.gross_rate[j];
        } else {
            row.service_rate_obs = static_cast<double>(path.saturated(last, j)) / t;
            row.service_rate_target = envd.on_fraction[j] * mu;
        }
        row.service_rate_thresh = 4.0 * std::sqrt(var_proxy / t) + 1e-9;

        row.pass = std::abs(row.on_fraction_obs - row.on_fraction_target) <= row.on_fraction_thresh &&
                   std::abs(row.service_rate_obs - row.service_rate_target) <= row.service_rate_thresh;
        rows.push_back(row);
    }
    return rows;
}

RateDiagnostic rate_diagnostic(const std::vector<std::pair<double, double>>& sup_by_horizon,
                               double moment_order) {
    if (sup_by_horizon.size() < 4)
        throw std::invalid_argument("rate_diagnostic: need >= 4 horizon points");
    double lo = sup_by_horizon.front().first, hi = lo;
    for (const auto& [t, d] : sup_by_horizon) {
        if (!(t > 0.0)) throw std::invalid_argument("rate_diagnostic: horizons must be > 0");
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi / lo < 100.0)
        throw std::invalid_argument("rate_diagnostic: horizons must span >= 2 decades");

    std::vector<double> x, y;
    for (const auto& [t, d] : sup_by_horizon) {
        x.push_back(std::log(t));
        y.push_back(std::log(std::max(d, 1e-15)));
    }
    const LineFit fit = fit_line(x, y);
    RateDiagnostic diag;
    diag.exponent = fit.slope;
    diag.intercept = fit.intercept;
    const double p_eff = std::min(moment_order, 3.9);
    diag.threshold = 1.0 / p_eff + 0.1;
    diag.pass = diag.exponent < diag.threshold;
    return diag;
}

void write_scaling_csv(const ScalingReport& report, std::ostream& out) {
    out << "scale,station,class,ks_at_horizon,sup_ks_dist,sup_quantile_dist,sup_mean_dist,"
           "lln_c_resid,lln_s_resid,reps\n";
    for (const auto& s : report.scales) {
        for (int j = 0; j < s.ks_at_horizon.size(); ++j) {
            out << fmt_g17(s.scale) << ',' << j + 1 << ',' << station_class_name(s.station_class[j])
                << ',' << fmt_g17(s.ks_at_horizon[j]) << ',' << fmt_g17(s.sup_ks_dist[j]) << ','
                << fmt_g17(s.sup_quantile_dist[j]) << ',' << fmt_g17(s.sup_mean_dist[j]) << ','
                << fmt_g17(s.lln_c_resid[j]) << ',' << fmt_g17(s.lln_s_resid[j]) << ',' << s.reps
                << '\n';
        }
    }
}

void write_scaling_long_csv(const ScalingReport& report, std::ostream& out) {
    out << "scale,station,checkpoint_frac,ks,quantile_dist\n";
    for (const auto& s : report.scales) {
        const long chk = s.ks_by_checkpoint.rows();
        for (int j = 0; j < s.ks_by_checkpoint.cols(); ++j) {
            for (long c = 0; c < chk; ++c) {
                out << fmt_g17(s.scale) << ',' << j + 1 << ','
                    << fmt_g17(static_cast<double>(c + 1) / static_cast<double>(chk)) << ','
                    << fmt_g17(s.ks_by_checkpoint(c, j)) << ','
                    << fmt_g17(s.qdist_by_checkpoint(c, j)) << '\n';
            }
        }
    }
}

void write_scaling_summary(const ScalingReport& report, std::ostream& out) {
    out << "diffusion-scale comparison: T=" << fmt_g17(report.T) << " reps=" << report.reps
        << " seed=" << report.root_seed << "\n";
    for (const auto& s : report.scales) {
        out << "scale n=" << fmt_g17(s.scale) << "\n";
        for (int j = 0; j < s.ks_at_horizon.size(); ++j) {
            out << "  station " << j + 1 << " [" << station_class_name(s.station_class[j]) << "] ";
            if (s.station_class[j] == StationClass::StrictBottleneck)
                out << "fluid growth expected; KS reported for reference only: ";
            out << "ks=" << fmt_g17(s.ks_at_horizon[j])
                << " sup_ks=" << fmt_g17(s.sup_ks_dist[j])
                << " sup_qdist=" << fmt_g17(s.sup_quantile_dist[j])
                << " lln_c=" << fmt_g17(s.lln_c_resid[j])
                << " lln_s=" << fmt_g17(s.lln_s_resid[j]) << "\n";
        }
    }
}

}  // namespace jacksim
