#include "jacksim/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace jacksim {

const char* station_class_name(StationClass c) {
    switch (c) {
        case StationClass::Nonbottleneck: return "nonbottleneck";
        case StationClass::BalancedBottleneck: return "balanced-bottleneck";
        case StationClass::StrictBottleneck: return "strict-bottleneck";
    }
    return "?";
}

Vec TrafficSolution::throughput(const NetworkSpec& spec, const EnvDerived& envd) const {
    const int k = spec.num_stations;
    Vec out(k);
    for (int j = 0; j < k; ++j) {
        const double cap = envd.on_fraction[j] * spec.stations[j].service_rate;
        out[j] = std::min(gross_rate[j], cap);
    }
    return out;
}

TrafficSolution solve_traffic(const NetworkSpec& spec, const EnvDerived& envd,
                              const Vec& intensity, double tol, const std::optional<Vec>& init) {
    const int k = spec.num_stations;
    Vec capacity(k);
    for (int j = 0; j < k; ++j)
        capacity[j] = envd.on_fraction[j] * spec.stations[j].service_rate;

    Vec gamma = init ? *init : intensity;
    const long max_iter = 1'000'000;

    TrafficSolution sol;
    for (long it = 0; it < max_iter; ++it) {
        Vec flow = gamma.cwiseMin(capacity);
        Vec next = intensity + spec.routing.transpose() * flow;
        double residual = (next - gamma).lpNorm<Eigen::Infinity>();
        gamma = next;
        if (residual < tol) {
            sol.iterations = it + 1;
            // report the genuine equation residual of the returned iterate
            Vec check = intensity + spec.routing.transpose() * gamma.cwiseMin(capacity);
            sol.residual = (check - gamma).lpNorm<Eigen::Infinity>();
            sol.gross_rate = gamma;
            sol.traffic_coeff = gamma.cwiseQuotient(capacity);
            sol.station_class.resize(k);
            for (int j = 0; j < k; ++j) {
                const double rho = sol.traffic_coeff[j];
                if (std::abs(rho - 1.0) <= kBottleneckTol)
                    sol.station_class[j] = StationClass::BalancedBottleneck;
                else if (rho < 1.0)
                    sol.station_class[j] = StationClass::Nonbottleneck;
                else
                    sol.station_class[j] = StationClass::StrictBottleneck;
            }
            return sol;
        }
    }
    throw std::runtime_error(
        "traffic equations did not converge; routing spectral radius is likely >= 1");
}

RbmParams rbm_params(const NetworkSpec& spec, const EnvDerived& envd,
                     const TrafficSolution& traffic, const Vec& intensity, const Mat& cov_rate) {
    const int k = spec.num_stations;
    if (intensity.size() != k || cov_rate.rows() != k || cov_rate.cols() != k ||
        traffic.gross_rate.size() != k)
        throw std::invalid_argument("rbm_params: inconsistent dimensions");

    const Mat& p = spec.routing;
    RbmParams out;
    out.reflection = Mat::Identity(k, k) - p;

    Vec effective_rate(k);  // alpha_j mu_j
    for (int j = 0; j < k; ++j)
        effective_rate[j] = envd.on_fraction[j] * spec.stations[j].service_rate;

    // drift_l = lambda_l - sum_j (alpha_j mu_j) (I - P)_{jl}
    out.drift = intensity - out.reflection.transpose() * effective_rate;

    out.covariance = cov_rate;
    for (int j = 0; j < k; ++j) {
        const StationSpec& st = spec.stations[j];
        const double mu = st.service_rate;
        const double flow = std::min(traffic.gross_rate[j], effective_rate[j]);
        const double rho_cap = std::min(traffic.traffic_coeff[j], 1.0);
        const double service_term =
            (st.service_var * mu * mu * mu * envd.on_fraction[j] +
             mu * mu * envd.env_var_rate[j]) * rho_cap;
        // fill one triangle and mirror so Gamma is symmetric to the bit
        for (int a = 0; a < k; ++a) {
            for (int b = a; b < k; ++b) {
                const double delta_ab = a == b ? 1.0 : 0.0;
                const double delta_ja = j == a ? 1.0 : 0.0;
                const double delta_jb = j == b ? 1.0 : 0.0;
                const double term = flow * p(j, a) * (delta_ab - p(j, b)) +
                                    service_term * (p(j, a) - delta_ja) * (p(j, b) - delta_jb);
                out.covariance(a, b) += term;
                if (a != b) out.covariance(b, a) += term;
            }
        }
    }
    return out;
}

}  // namespace jacksim
