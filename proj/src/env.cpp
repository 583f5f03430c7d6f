#include "jacksim/env.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "jacksim/format.hpp"
#include "jacksim/rng.hpp"

namespace jacksim {

EnvPath generate_env(const NetworkSpec& spec, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");

    EnvPath path;
    path.horizon = horizon;
    path.stations.resize(spec.num_stations);

    for (int j = 0; j < spec.num_stations; ++j) {
        const StationSpec& st = spec.stations[j];
        auto& env = path.stations[j];
        env.boundary.push_back(0.0);
        env.on_before.push_back(0.0);

        if (st.off_mean == 0.0) {
            env.boundary.push_back(std::numeric_limits<double>::infinity());
            env.on_before.push_back(std::numeric_limits<double>::infinity());
            continue;
        }

        Rng on_rng = derive_stream(seed, {static_cast<std::uint64_t>(j), 0});
        Rng off_rng = derive_stream(seed, {static_cast<std::uint64_t>(j), 1});
        double t = 0.0;
        double on_total = 0.0;
        bool on = true;
        while (t < horizon) {
            const double len = on ? st.on_dist.sample(on_rng) : st.off_dist.sample(off_rng);
            t += len;
            if (on) on_total += len;
            env.boundary.push_back(t);
            env.on_before.push_back(on_total);
            on = !on;
        }
    }
    return path;
}

double EnvPath::cumulative_on(int station, double t) const {
    if (!(t >= 0.0) || t > horizon)
        throw std::invalid_argument("cumulative_on: t outside [0, horizon]");
    const auto& env = stations[station];
    const auto it = std::upper_bound(env.boundary.begin(), env.boundary.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - env.boundary.begin()) - 1;
    double c = env.on_before[idx];
    if (idx % 2 == 0) c += t - env.boundary[idx];
    return c;
}

bool EnvPath::on_at(int station, double t) const {
    const auto& env = stations[station];
    const auto it = std::upper_bound(env.boundary.begin(), env.boundary.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - env.boundary.begin()) - 1;
    return idx % 2 == 0;
}

void write_env_csv(const EnvPath& path, std::ostream& out) {
    out << "station,start,end,state\n";
    for (std::size_t j = 0; j < path.stations.size(); ++j) {
        const auto& env = path.stations[j];
        for (std::size_t i = 0; i + 1 < env.boundary.size(); ++i) {
            const double start = env.boundary[i];
            const double end = std::min(env.boundary[i + 1], path.horizon);
            if (start >= path.horizon) break;
            out << j << ',' << fmt_g17(start) << ',' << fmt_g17(end) << ','
                << (i % 2 == 0 ? "on" : "off") << '\n';
        }
    }
}

}  // namespace jacksim
