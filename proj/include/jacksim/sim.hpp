#pragma once

#include <cstdint>
#include <iosfwd>

#include "jacksim/network.hpp"

namespace jacksim {

// Sampled trajectory of one simulation run. Row i of each matrix is the state
// at times[i]; counters are cumulative since time 0. The internal simulation
// is exact event-driven; the grid only controls what gets recorded.
struct SimPath {
    int num_stations = 0;
    double horizon = 0.0;
    double sample_dt = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> times;
    MatI queue;       // customers present
    Mat busy;         // cumulative time ON and serving
    Mat on_time;      // cumulative time ON
    MatI external;    // cumulative external arrivals
    MatI saturated;   // cumulative service renewals over ON time, S_j(C_j(t))
    MatI routed;      // cumulative routing decisions, column j*(K+1)+c, c==K is exit
    VecI initial_queue;

    std::int64_t routed_count(int sample, int from, int to) const {
        return routed(sample, from * (num_stations + 1) + to);
    }
};

// Event-driven run honoring preemptive-resume service under the ON/OFF
// environment. Simultaneous events are ordered completion, environment
// transition, external arrival; within a class by station index.
SimPath simulate(const NetworkSpec& spec, double horizon, double sample_dt, std::uint64_t seed);

// Max over samples of (B - C)+, (C - t)+, (-B)+ and any decrease of B.
// Contract: exactly 0.
double busy_minus_on_check(const SimPath& path);

// Max absolute customer-conservation violation over samples and stations.
// Contract: exactly 0.
std::int64_t flow_identity_check(const SimPath& path);

void write_sim_csv(const SimPath& path, std::ostream& out);

}  // namespace jacksim
