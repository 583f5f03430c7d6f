#pragma once

#include <string>
#include <vector>

#include "jacksim/arrivals.hpp"
#include "jacksim/dist.hpp"
#include "jacksim/types.hpp"

namespace jacksim {

// Single-server station with an ON/OFF environment. Declared moments travel
// with the distribution tags and are cross-checked during validation.
// off_mean == 0 encodes a reliable server (OFF degenerate at 0).
struct StationSpec {
    double service_rate = 1.0;  // customers per unit time, > 0
    double service_var = 0.0;   // variance of one service time
    Distribution service_dist = Distribution::exponential(1.0);

    double on_mean = 1.0;  // > 0
    double on_var = 0.0;
    Distribution on_dist = Distribution::deterministic(1.0);

    double off_mean = 0.0;  // >= 0
    double off_var = 0.0;
    Distribution off_dist = Distribution::deterministic(0.0);

    // Fill declared moments from the distribution tags.
    static StationSpec make(const Distribution& service, const Distribution& on,
                            const Distribution& off);
    // Always-on server.
    static StationSpec reliable(const Distribution& service);
};

struct NetworkSpec {
    int num_stations = 0;
    std::vector<StationSpec> stations;
    Mat routing;  // K x K substochastic; row-sum deficit is the exit probability
    ArrivalSpec arrival;
    VecI initial_queue;  // defaults to zero when empty

    VecI initial_queue_or_zero() const;
};

// Long-run ON fraction and environment variance coefficient per station.
struct EnvDerived {
    Vec on_fraction;    // a / (a + b), in (0, 1]
    Vec env_var_rate;   // (a^2 d^2 + b^2 s^2) / (a + b)^3, >= 0
};

struct ValidationReport {
    std::vector<std::string> failures;
    double spectral_radius = 0.0;

    bool ok() const { return failures.empty(); }
};

// Spectral radius of a nonnegative matrix by power iteration (L1 ratios with
// a factorial-length window so periodic classes converge too). Exact 0 for
// nilpotent matrices.
double spectral_radius(const Mat& m, double tol = 1e-12, long max_iter = 1'000'000);

// Checks every structural assumption; the report lists everything violated.
ValidationReport validate(const NetworkSpec& spec);

EnvDerived env_derived(const NetworkSpec& spec);

}  // namespace jacksim
