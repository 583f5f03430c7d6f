#pragma once

#include <optional>
#include <vector>

#include "jacksim/network.hpp"

namespace jacksim {

enum class StationClass { Nonbottleneck, BalancedBottleneck, StrictBottleneck };

const char* station_class_name(StationClass c);

struct TrafficSolution {
    Vec gross_rate;              // gamma: unique fixed point of the traffic equations
    Vec traffic_coeff;           // rho_j = gamma_j / (alpha_j mu_j)
    std::vector<StationClass> station_class;
    double residual = 0.0;       // sup-norm residual of the fixed point
    long iterations = 0;

    // effective long-run departure rate, gamma_j ^ alpha_j mu_j
    Vec throughput(const NetworkSpec& spec, const EnvDerived& envd) const;
};

struct RbmParams {
    Vec drift;        // lambda - (alpha mu)(I - P), row-vector convention
    Mat covariance;
    Mat reflection;   // I - P
};

// Fixed-point iteration for gamma_j = lambda_j + sum_i (gamma_i ^ alpha_i mu_i) p_ij,
// started from lambda (or `init`), run until the equation residual drops
// below `tol`. Throws on non-convergence, which signals a spectral-radius
// violation.
TrafficSolution solve_traffic(const NetworkSpec& spec, const EnvDerived& envd,
                              const Vec& intensity, double tol = 1e-12,
                              const std::optional<Vec>& init = std::nullopt);

// Assembles the heavy-traffic drift and covariance from the network
// primitives and the arrival law (lambda, V).
RbmParams rbm_params(const NetworkSpec& spec, const EnvDerived& envd,
                     const TrafficSolution& traffic, const Vec& intensity, const Mat& cov_rate);

// classification tolerance on |rho - 1|
inline constexpr double kBottleneckTol = 1e-9;

}  // namespace jacksim
