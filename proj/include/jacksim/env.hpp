#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "jacksim/network.hpp"

namespace jacksim {

// Realized ON/OFF environment per station. Each station starts a fresh ON
// interval at time 0; interval i covers [boundary[i], boundary[i+1]) and is
// ON iff i is even. The last boundary is >= horizon, so [0, horizon] is tiled
// exactly. A reliable station (off_mean == 0) is stored as one unbounded ON
// interval.
struct EnvPath {
    struct StationEnv {
        std::vector<double> boundary;   // boundary[0] == 0
        std::vector<double> on_before;  // cumulative ON time at each boundary
    };

    double horizon = 0.0;
    std::vector<StationEnv> stations;

    // Lebesgue measure of ON within [0, t]; throws when t is outside [0, horizon].
    double cumulative_on(int station, double t) const;

    // Right-continuous state indicator.
    bool on_at(int station, double t) const;
};

EnvPath generate_env(const NetworkSpec& spec, double horizon, std::uint64_t seed);

void write_env_csv(const EnvPath& path, std::ostream& out);

}  // namespace jacksim
