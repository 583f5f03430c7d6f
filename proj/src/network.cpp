#include "jacksim/network.hpp"

#include <cmath>
#include <sstream>

namespace jacksim {

namespace {

bool close_rel(double a, double b, double rtol = 1e-9) {
    if (a == b) return true;
    return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

StationSpec StationSpec::make(const Distribution& service, const Distribution& on,
                              const Distribution& off) {
    StationSpec s;
    s.service_dist = service;
    s.service_rate = 1.0 / service.mean();
    s.service_var = service.variance();
    s.on_dist = on;
    s.on_mean = on.mean();
    s.on_var = on.variance();
    s.off_dist = off;
    s.off_mean = off.mean();
    s.off_var = off.variance();
    return s;
}

StationSpec StationSpec::reliable(const Distribution& service) {
    return make(service, Distribution::deterministic(1.0), Distribution::deterministic(0.0));
}

VecI NetworkSpec::initial_queue_or_zero() const {
    if (initial_queue.size() == num_stations) return initial_queue;
    return VecI::Zero(num_stations);
}

double spectral_radius(const Mat& m, double tol, long max_iter) {
    const long n = m.rows();
    if (n == 0) return 0.0;

    Vec v = Vec::Constant(n, 1.0 / static_cast<double>(n));

    // Window divisible by every possible period of a peripheral eigenvalue
    // class (periods never exceed the dimension).
    long window = 1;
    for (long k = 2; k <= std::min<long>(n, 7); ++k) window *= k;

    std::vector<double> log_ratio;
    log_ratio.reserve(static_cast<std::size_t>(window) * 4);
    double prev_est = -1.0;
    int stable_run = 0;

    for (long iter = 0; iter < max_iter; ++iter) {
        Vec w = m * v;
        double nw = w.lpNorm<1>();
        if (nw == 0.0) return 0.0;  // m^(iter+1) annihilates a positive vector: nilpotent
        log_ratio.push_back(std::log(nw));  // v is L1-normalized, so ratio == nw
        v = w / nw;

        if (static_cast<long>(log_ratio.size()) >= window) {
            double sum = 0.0;
            for (long i = static_cast<long>(log_ratio.size()) - window;
                 i < static_cast<long>(log_ratio.size()); ++i)
                sum += log_ratio[i];
            double est = std::exp(sum / static_cast<double>(window));
            if (prev_est >= 0.0 && std::abs(est - prev_est) < tol) return est;
            prev_est = est;
        } else if (log_ratio.size() >= 2) {
            // fast path for aperiodic matrices: plain ratio settles early
            double r0 = std::exp(log_ratio[log_ratio.size() - 2]);
            double r1 = std::exp(log_ratio.back());
            stable_run = std::abs(r1 - r0) < tol * 0.1 ? stable_run + 1 : 0;
            if (stable_run >= 4 && iter >= 2 * n + 8) return r1;
        }
    }
    return prev_est >= 0.0 ? prev_est : std::exp(log_ratio.back());
}

ValidationReport validate(const NetworkSpec& spec) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) { rep.failures.push_back(msg); };

    const int k = spec.num_stations;
    if (k < 1) {
        fail("num_stations must be >= 1");
        return rep;
    }
    if (static_cast<int>(spec.stations.size()) != k) {
        fail("stations list length must equal num_stations");
        return rep;
    }
    if (spec.routing.rows() != k || spec.routing.cols() != k) {
        fail("routing matrix must be K x K");
        return rep;
    }

    for (int j = 0; j < k; ++j) {
        const StationSpec& st = spec.stations[j];
        std::ostringstream at;
        at << "station " << j << ": ";
        std::string why;

        if (!(st.service_rate > 0.0)) fail(at.str() + "service_rate must be > 0");
        if (!(st.service_var >= 0.0)) fail(at.str() + "service_var must be >= 0");
        if (!(st.on_mean > 0.0)) fail(at.str() + "on_mean must be > 0");
        if (!(st.on_var >= 0.0)) fail(at.str() + "on_var must be >= 0");
        if (!(st.off_mean >= 0.0)) fail(at.str() + "off_mean must be >= 0");
        if (!(st.off_var >= 0.0)) fail(at.str() + "off_var must be >= 0");

        if (!st.service_dist.well_formed(&why)) fail(at.str() + "service_dist: " + why);
        else {
            if (!close_rel(st.service_dist.mean(), 1.0 / st.service_rate))
                fail(at.str() + "service_dist mean does not match 1/service_rate");
            if (!close_rel(st.service_dist.variance(), st.service_var))
                fail(at.str() + "service_dist variance does not match service_var");
            if (!(st.service_dist.mean() > 0.0))
                fail(at.str() + "service times must have positive mean");
        }
        if (!st.on_dist.well_formed(&why)) fail(at.str() + "on_dist: " + why);
        else {
            if (!close_rel(st.on_dist.mean(), st.on_mean))
                fail(at.str() + "on_dist mean does not match on_mean");
            if (!close_rel(st.on_dist.variance(), st.on_var))
                fail(at.str() + "on_dist variance does not match on_var");
        }
        if (!st.off_dist.well_formed(&why)) fail(at.str() + "off_dist: " + why);
        else {
            if (!close_rel(st.off_dist.mean(), st.off_mean))
                fail(at.str() + "off_dist mean does not match off_mean");
            if (!close_rel(st.off_dist.variance(), st.off_var))
                fail(at.str() + "off_dist variance does not match off_var");
            if (st.off_mean == 0.0 &&
                !(st.off_dist.family == DistFamily::Deterministic && st.off_dist.p1 == 0.0))
                fail(at.str() + "off_mean == 0 requires OFF degenerate at 0");
        }
    }

    for (int i = 0; i < k; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < k; ++j) {
            double p = spec.routing(i, j);
            if (!(p >= 0.0 && p <= 1.0)) {
                std::ostringstream msg;
                msg << "routing(" << i << "," << j << ") must lie in [0,1]";
                fail(msg.str());
            }
            row_sum += p;
        }
        if (row_sum > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "routing row " << i << " sums to " << row_sum << " > 1";
            fail(msg.str());
        }
    }

    bool routing_in_range = true;
    for (int i = 0; i < k * k; ++i)
        if (!(spec.routing(i / k, i % k) >= 0.0)) routing_in_range = false;
    if (routing_in_range) {
        rep.spectral_radius = spectral_radius(spec.routing);
        if (rep.spectral_radius >= 1.0 - 1e-9) {
            std::ostringstream msg;
            msg << "routing spectral radius " << rep.spectral_radius << " must be < 1";
            fail(msg.str());
        }
    }

    if (spec.arrival.num_stations != k) {
        fail("arrival spec dimension does not match num_stations");
    } else if (auto why = validate_arrival(spec.arrival)) {
        fail("arrival: " + *why);
    } else {
        Vec intensity;
        Mat cov;
        analytic_lv(spec.arrival, &intensity, &cov);
        if (!(intensity.maxCoeff() > 0.0))
            fail("arrival intensity must be positive in at least one coordinate");
    }

    if (spec.initial_queue.size() != 0) {
        if (spec.initial_queue.size() != k) fail("initial_queue must have K entries");
        else if (spec.initial_queue.minCoeff() < 0) fail("initial_queue entries must be >= 0");
    }

    return rep;
}

EnvDerived env_derived(const NetworkSpec& spec) {
    const int k = spec.num_stations;
    EnvDerived out;
    out.on_fraction.resize(k);
    out.env_var_rate.resize(k);
    for (int j = 0; j < k; ++j) {
        const StationSpec& st = spec.stations[j];
        const double a = st.on_mean;
        const double b = st.off_mean;
        const double s2 = st.on_var;
        const double d2 = st.off_var;
        out.on_fraction[j] = a / (a + b);
        const double cycle = a + b;
        out.env_var_rate[j] = (a * a * d2 + b * b * s2) / (cycle * cycle * cycle);
    }
    return out;
}

}  // namespace jacksim
