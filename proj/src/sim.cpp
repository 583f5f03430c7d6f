#include "jacksim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "jacksim/env.hpp"
#include "jacksim/format.hpp"
#include "jacksim/rng.hpp"

namespace jacksim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// stream tags under the run's root seed
constexpr std::uint64_t kStreamArrivals = 10;
constexpr std::uint64_t kStreamEnv = 11;
constexpr std::uint64_t kStreamService = 12;
constexpr std::uint64_t kStreamRouting = 13;

enum EventClass { kCompletion = 0, kEnvTransition = 1, kArrival = 2 };

struct Engine {
    const NetworkSpec& spec;
    int k;
    double horizon;

    ArrivalPath arrivals;
    EnvPath env;
    std::vector<Rng> service_rng;
    std::vector<Rng> routing_rng;

    // dynamic state
    double cursor = 0.0;
    std::vector<std::int64_t> queue_len;
    std::vector<std::size_t> env_idx;      // current interval per station
    std::vector<bool> serving;
    std::vector<bool> has_partial;
    std::vector<double> remaining;
    std::vector<double> resume_time;
    std::vector<double> completion;        // kInf when not serving
    std::vector<double> off_sum;           // cumulative not-ON time
    std::vector<double> busy_sum;          // cumulative serving time
    std::vector<std::int64_t> ext_cum;
    std::vector<std::int64_t> routed_cum;  // k x (k+1)
    std::vector<std::vector<double>> service_cumsum;  // partial sums of service draws
    std::size_t next_arrival = 0;

    Engine(const NetworkSpec& s, double h, std::uint64_t seed)
        : spec(s), k(s.num_stations), horizon(h) {
        arrivals = generate(s.arrival, h, derive_seed(seed, {kStreamArrivals}));
        env = generate_env(s, h, derive_seed(seed, {kStreamEnv}));
        for (int j = 0; j < k; ++j) {
            service_rng.push_back(derive_stream(seed, {kStreamService, static_cast<std::uint64_t>(j)}));
            routing_rng.push_back(derive_stream(seed, {kStreamRouting, static_cast<std::uint64_t>(j)}));
        }
        VecI q0 = s.initial_queue_or_zero();
        queue_len.assign(k, 0);
        for (int j = 0; j < k; ++j) queue_len[j] = q0[j];
        env_idx.assign(k, 0);
        serving.assign(k, false);
        has_partial.assign(k, false);
        remaining.assign(k, 0.0);
        resume_time.assign(k, 0.0);
        completion.assign(k, kInf);
        off_sum.assign(k, 0.0);
        busy_sum.assign(k, 0.0);
        ext_cum.assign(k, 0);
        routed_cum.assign(static_cast<std::size_t>(k) * (k + 1), 0);
        service_cumsum.resize(k);
        for (int j = 0; j < k; ++j) maybe_start_service(j, 0.0);
    }

    bool is_on(int j) const { return env_idx[j] % 2 == 0; }

    double next_env_time(int j) const {
        const auto& b = env.stations[j].boundary;
        return env_idx[j] + 1 < b.size() ? b[env_idx[j] + 1] : kInf;
    }

    void maybe_start_service(int j, double t) {
        if (serving[j] || !is_on(j) || queue_len[j] <= 0) return;
        if (!has_partial[j]) {
            const double eta = spec.stations[j].service_dist.sample(service_rng[j]);
            const double prev = service_cumsum[j].empty() ? 0.0 : service_cumsum[j].back();
            service_cumsum[j].push_back(prev + eta);
            remaining[j] = eta;
            has_partial[j] = true;
        }
        serving[j] = true;
        resume_time[j] = t;
        completion[j] = t + remaining[j];
    }

    void advance_to(double t) {
        const double dt = t - cursor;
        if (dt <= 0.0) return;
        for (int j = 0; j < k; ++j) {
            if (!is_on(j)) off_sum[j] += dt;
            if (serving[j]) busy_sum[j] += dt;
        }
        cursor = t;
    }

    // (time, class, station) of the next pending event
    bool peek(double* time, int* cls, int* station) const {
        double bt = kInf;
        int bc = 0, bs = 0;
        for (int j = 0; j < k; ++j) {
            if (completion[j] < bt) { bt = completion[j]; bc = kCompletion; bs = j; }
        }
        for (int j = 0; j < k; ++j) {
            const double t = next_env_time(j);
            if (t < bt || (t == bt && kEnvTransition < bc)) { bt = t; bc = kEnvTransition; bs = j; }
        }
        if (next_arrival < arrivals.events.size()) {
            const double t = arrivals.events[next_arrival].time;
            if (t < bt || (t == bt && kArrival < bc)) { bt = t; bc = kArrival; bs = arrivals.events[next_arrival].station; }
        }
        if (bt == kInf) return false;
        *time = bt;
        *cls = bc;
        *station = bs;
        return true;
    }

    void process(double t, int cls, int station) {
        if (cls == kCompletion) {
            const int j = station;
            // route the served customer
            const double u = routing_rng[j].uniform();
            double acc = 0.0;
            int target = k;  // exit
            for (int c = 0; c < k; ++c) {
                acc += spec.routing(j, c);
                if (u < acc) { target = c; break; }
            }
            ++routed_cum[static_cast<std::size_t>(j) * (k + 1) + target];
            --queue_len[j];
            serving[j] = false;
            has_partial[j] = false;
            completion[j] = kInf;
            if (target < k) {
                ++queue_len[target];
                maybe_start_service(target, t);
            }
            maybe_start_service(j, t);
        } else if (cls == kEnvTransition) {
            const int j = station;
            ++env_idx[j];
            if (!is_on(j)) {
                if (serving[j]) {
                    // preemptive resume: park the remaining requirement
                    remaining[j] = std::max(0.0, remaining[j] - (t - resume_time[j]));
                    serving[j] = false;
                    completion[j] = kInf;
                }
            } else {
                maybe_start_service(j, t);
            }
        } else {
            const ArrivalEvent& e = arrivals.events[next_arrival++];
            ext_cum[e.station] += e.batch;
            queue_len[e.station] += e.batch;
            maybe_start_service(e.station, t);
        }
    }
};

}  // namespace

SimPath simulate(const NetworkSpec& spec, double horizon, double sample_dt, std::uint64_t seed) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");

    const int k = spec.num_stations;
    const long n_samples = static_cast<long>(std::floor(horizon / sample_dt + 1e-9)) + 1;

    SimPath path;
    path.num_stations = k;
    path.horizon = horizon;
    path.sample_dt = sample_dt;
    path.seed = seed;
    path.initial_queue = spec.initial_queue_or_zero();
    path.times.resize(n_samples);
    path.queue.resize(n_samples, k);
    path.busy.resize(n_samples, k);
    path.on_time.resize(n_samples, k);
    path.external.resize(n_samples, k);
    path.saturated.resize(n_samples, k);
    path.routed.resize(n_samples, k * (k + 1));

    if (horizon == 0.0) {
        path.times[0] = 0.0;
        for (int j = 0; j < k; ++j) {
            path.queue(0, j) = path.initial_queue[j];
            path.busy(0, j) = 0.0;
            path.on_time(0, j) = 0.0;
            path.external(0, j) = 0;
            path.saturated(0, j) = 0;
        }
        path.routed.row(0).setZero();
        return path;
    }

    Engine eng(spec, horizon, seed);

    long sample = 0;
    auto record = [&](double s) {
        eng.advance_to(s);
        path.times[sample] = s;
        for (int j = 0; j < k; ++j) {
            path.queue(sample, j) = eng.queue_len[j];
            const double c = s - eng.off_sum[j];  // single subtraction keeps C monotone, <= s
            path.on_time(sample, j) = c;
            path.busy(sample, j) = std::min(eng.busy_sum[j], c);
            path.external(sample, j) = eng.ext_cum[j];
        }
        for (int col = 0; col < k * (k + 1); ++col)
            path.routed(sample, col) = eng.routed_cum[col];
        ++sample;
    };

    while (true) {
        double te;
        int cls, station;
        const bool have = eng.peek(&te, &cls, &station);
        const double stop = have ? std::min(te, horizon) : horizon;
        while (sample < n_samples && static_cast<double>(sample) * sample_dt < stop)
            record(static_cast<double>(sample) * sample_dt);
        if (!have || te > horizon) break;
        eng.advance_to(te);
        eng.process(te, cls, station);
    }
    while (sample < n_samples) record(static_cast<double>(sample) * sample_dt);

    // saturated service counts: extend each station's service renewal sequence
    // past C_j(horizon), then count partial sums under C_j at each sample.
    // Extending here cannot disturb the run; it is already over.
    for (int j = 0; j < k; ++j) {
        auto& sums = eng.service_cumsum[j];
        const double c_end = path.on_time(n_samples - 1, j);
        double last = sums.empty() ? 0.0 : sums.back();
        while (last <= c_end) {
            last += spec.stations[j].service_dist.sample(eng.service_rng[j]);
            sums.push_back(last);
        }
        for (long i = 0; i < n_samples; ++i) {
            const double c = path.on_time(i, j);
            path.saturated(i, j) = static_cast<std::int64_t>(
                std::upper_bound(sums.begin(), sums.end(), c) - sums.begin());
        }
    }
    return path;
}

double busy_minus_on_check(const SimPath& path) {
    double worst = 0.0;
    for (long i = 0; i < path.busy.rows(); ++i) {
        for (int j = 0; j < path.num_stations; ++j) {
            worst = std::max(worst, path.busy(i, j) - path.on_time(i, j));
            worst = std::max(worst, -path.busy(i, j));
            worst = std::max(worst, path.on_time(i, j) - path.times[i]);
            if (i > 0) worst = std::max(worst, path.busy(i - 1, j) - path.busy(i, j));
        }
    }
    return std::max(worst, 0.0);
}

std::int64_t flow_identity_check(const SimPath& path) {
    const int k = path.num_stations;
    std::int64_t worst = 0;
    for (long i = 0; i < path.queue.rows(); ++i) {
        for (int j = 0; j < k; ++j) {
            std::int64_t inflow = 0, outflow = 0;
            for (int c = 0; c < k; ++c) inflow += path.routed_count(i, c, j);
            for (int c = 0; c <= k; ++c) outflow += path.routed_count(i, j, c);
            const std::int64_t expect =
                path.initial_queue[j] + path.external(i, j) + inflow - outflow;
            worst = std::max(worst, std::abs(path.queue(i, j) - expect));
        }
    }
    return worst;
}

void write_sim_csv(const SimPath& path, std::ostream& out) {
    const int k = path.num_stations;
    out << 't';
    for (int j = 1; j <= k; ++j) out << ",Q_" << j;
    for (int j = 1; j <= k; ++j) out << ",B_" << j;
    for (int j = 1; j <= k; ++j) out << ",C_" << j;
    for (int j = 1; j <= k; ++j) out << ",A_" << j;
    out << '\n';
    for (long i = 0; i < static_cast<long>(path.times.size()); ++i) {
        out << fmt_g17(path.times[i]);
        for (int j = 0; j < k; ++j) out << ',' << path.queue(i, j);
        for (int j = 0; j < k; ++j) out << ',' << fmt_g17(path.busy(i, j));
        for (int j = 0; j < k; ++j) out << ',' << fmt_g17(path.on_time(i, j));
        for (int j = 0; j < k; ++j) out << ',' << path.external(i, j);
        out << '\n';
    }
}

}  // namespace jacksim
