#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jacksim/dist.hpp"
#include "jacksim/types.hpp"

namespace jacksim {

// Multi-dimensional regenerative arrival flows. Every built-in family has
// explicit regeneration points and closed-form long-run intensity lambda and
// covariance rate V, so simulation output can be checked against exact values.

// K independent renewal streams. A null entry means the coordinate receives
// no external arrivals. Joint regeneration points are the renewal epochs of
// the designated coordinate: the unique non-exponential one if present,
// otherwise the lowest-indexed active coordinate (all remaining coordinates
// are exponential, hence memoryless at those epochs). At most one coordinate
// may be non-exponential; otherwise the vector flow has no common
// regeneration epochs and the spec is rejected.
struct IndependentRenewal {
    std::vector<std::optional<Distribution>> interarrival;
};

// Independent Poisson stream per coordinate plus a shared Poisson burst
// stream; each burst adds one arrival to every coordinate simultaneously.
// The flow has stationary independent increments; regeneration marks are the
// unit grid t = 1, 2, ...
struct SharedBurstPoisson {
    Vec station_rate;        // idiosyncratic rate per coordinate, >= 0
    double burst_rate = 0.0; // common-shock rate, >= 0
};

// Poisson arrivals modulated by a finite CTMC started in state 0.
// state_rate is S x K: row s gives each coordinate's Poisson rate while the
// chain sits in state s. Regeneration marks are the jump epochs entering
// state 0 (plus theta_0 = 0).
struct MarkovModulatedPoisson {
    Mat generator;   // S x S, rows sum to 0
    Mat state_rate;  // S x K, entries >= 0
};

// Single renewal clock; at each epoch an i.i.d. nonnegative integer batch
// vector arrives (finite support). Regeneration marks are the epochs.
struct BatchRenewal {
    Distribution interarrival;
    std::vector<double> prob;
    std::vector<VecI> batch;  // one K-vector per atom
};

struct ArrivalSpec {
    int num_stations = 0;
    std::variant<IndependentRenewal, SharedBurstPoisson, MarkovModulatedPoisson, BatchRenewal> model;

    static ArrivalSpec poisson(const Vec& rates);  // independent exponential streams
};

struct ArrivalEvent {
    double time;
    int station;
    std::int64_t batch;
};

struct ArrivalPath {
    int num_stations = 0;
    double horizon = 0.0;
    std::vector<ArrivalEvent> events;   // nondecreasing times, ties by station
    std::vector<double> regen_marks;    // regen_marks[0] == 0, strictly increasing

    // A(horizon) per coordinate
    VecI total_counts() const;
};

struct LvEstimate {
    Vec intensity;
    Mat cov_rate;
    Vec intensity_radius;  // 95% half-widths from cycle-count asymptotics
    Mat cov_radius;
    int cycles = 0;
};

// nullopt means valid; otherwise the reason.
std::optional<std::string> validate_arrival(const ArrivalSpec& spec);

ArrivalPath generate(const ArrivalSpec& spec, double horizon, std::uint64_t seed);

// Closed-form (lambda, V) per family.
void analytic_lv(const ArrivalSpec& spec, Vec* intensity, Mat* cov_rate);

// Regenerative estimator over complete cycles; the trailing incomplete cycle
// is discarded. Requires >= 30 complete cycles.
LvEstimate estimate_lv(const ArrivalPath& path);

void write_arrival_csv(const ArrivalPath& path, std::ostream& out);

}  // namespace jacksim
