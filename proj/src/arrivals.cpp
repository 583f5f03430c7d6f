#include "jacksim/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "jacksim/format.hpp"

namespace jacksim {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Renewal epochs of `dist` in (0, horizon]; appends (t, station, 1) events.
void renewal_events(const Distribution& dist, int station, double horizon, Rng& rng,
                    std::vector<ArrivalEvent>* events, std::vector<double>* epochs = nullptr) {
    double t = 0.0;
    while (true) {
        t += dist.sample(rng);
        if (t > horizon) break;
        events->push_back({t, station, 1});
        if (epochs) epochs->push_back(t);
    }
}

void sort_events(std::vector<ArrivalEvent>* events) {
    std::stable_sort(events->begin(), events->end(), [](const ArrivalEvent& a, const ArrivalEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.station < b.station;
    });
}

// Index of the coordinate whose renewal epochs serve as regeneration marks,
// or -1 when no coordinate is active.
int designated_coordinate(const IndependentRenewal& m) {
    int designated = -1;
    int lowest_active = -1;
    for (int k = 0; k < static_cast<int>(m.interarrival.size()); ++k) {
        if (!m.interarrival[k]) continue;
        if (lowest_active < 0) lowest_active = k;
        if (m.interarrival[k]->family != DistFamily::Exponential && designated < 0) designated = k;
    }
    return designated >= 0 ? designated : lowest_active;
}

struct MmppDerived {
    Vec stationary;  // pi
    Mat deviation;   // integral of (P(t) - Pi) dt
};

MmppDerived mmpp_derived(const Mat& generator) {
    const long s = generator.rows();
    MmppDerived out;

    // pi G = 0, sum(pi) = 1
    Mat a = generator.transpose();
    a.row(s - 1).setOnes();
    Vec rhs = Vec::Zero(s);
    rhs[s - 1] = 1.0;
    out.stationary = a.fullPivLu().solve(rhs);

    Mat pi_rows = Vec::Ones(s) * out.stationary.transpose();
    out.deviation = (pi_rows - generator).fullPivLu().solve(Mat::Identity(s, s)) - pi_rows;
    return out;
}

}  // namespace

ArrivalSpec ArrivalSpec::poisson(const Vec& rates) {
    ArrivalSpec spec;
    spec.num_stations = static_cast<int>(rates.size());
    IndependentRenewal m;
    m.interarrival.resize(rates.size());
    for (int k = 0; k < rates.size(); ++k) {
        if (rates[k] > 0.0) m.interarrival[k] = Distribution::exponential(rates[k]);
    }
    spec.model = std::move(m);
    return spec;
}

std::optional<std::string> validate_arrival(const ArrivalSpec& spec) {
    const int k = spec.num_stations;
    if (k < 1) return "dimension must be >= 1";

    if (const auto* m = std::get_if<IndependentRenewal>(&spec.model)) {
        if (static_cast<int>(m->interarrival.size()) != k)
            return "independent-renewal needs one interarrival entry per coordinate";
        int non_exponential = 0;
        for (const auto& d : m->interarrival) {
            if (!d) continue;
            std::string why;
            if (!d->well_formed(&why)) return "interarrival: " + why;
            if (!(d->mean() > 0.0)) return "interarrival mean must be > 0";
            if (d->family != DistFamily::Exponential) ++non_exponential;
        }
        if (non_exponential > 1)
            return "independent-renewal admits at most one non-exponential coordinate "
                   "(no common regeneration epochs otherwise)";
        return std::nullopt;
    }

    if (const auto* m = std::get_if<SharedBurstPoisson>(&spec.model)) {
        if (m->station_rate.size() != k) return "shared-burst rate vector must have K entries";
        if (m->station_rate.minCoeff() < 0.0) return "shared-burst station rates must be >= 0";
        if (m->burst_rate < 0.0) return "burst rate must be >= 0";
        return std::nullopt;
    }

    if (const auto* m = std::get_if<MarkovModulatedPoisson>(&spec.model)) {
        const long s = m->generator.rows();
        if (s < 1 || m->generator.cols() != s) return "mmpp generator must be square";
        if (m->state_rate.rows() != s || m->state_rate.cols() != k)
            return "mmpp state_rate must be S x K";
        if (m->state_rate.minCoeff() < 0.0) return "mmpp rates must be >= 0";
        for (long i = 0; i < s; ++i) {
            double row = 0.0;
            for (long j = 0; j < s; ++j) {
                if (i != j && m->generator(i, j) < 0.0) return "mmpp off-diagonal rates must be >= 0";
                row += m->generator(i, j);
            }
            if (std::abs(row) > 1e-12) return "mmpp generator rows must sum to 0";
        }
        // every state must lead back to state 0, else regeneration can stall
        std::vector<char> reaches(s, 0);
        reaches[0] = 1;
        for (bool grew = true; grew;) {
            grew = false;
            for (long i = 0; i < s; ++i) {
                if (reaches[i]) continue;
                for (long j = 0; j < s; ++j) {
                    if (i != j && m->generator(i, j) > 0.0 && reaches[j]) {
                        reaches[i] = 1;
                        grew = true;
                        break;
                    }
                }
            }
        }
        for (long i = 0; i < s; ++i)
            if (!reaches[i]) return "mmpp: some state cannot reach state 0";
        return std::nullopt;
    }

    if (const auto* m = std::get_if<BatchRenewal>(&spec.model)) {
        std::string why;
        if (!m->interarrival.well_formed(&why)) return "batch interarrival: " + why;
        if (!(m->interarrival.mean() > 0.0)) return "batch interarrival mean must be > 0";
        if (m->prob.empty() || m->prob.size() != m->batch.size())
            return "batch distribution needs matching prob/batch lists";
        double total = 0.0;
        for (double p : m->prob) {
            if (p < 0.0) return "batch probabilities must be >= 0";
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) return "batch probabilities must sum to 1";
        for (const auto& b : m->batch) {
            if (b.size() != k) return "batch vectors must have K entries";
            if (b.minCoeff() < 0) return "batch entries must be >= 0";
        }
        return std::nullopt;
    }

    return "unknown arrival family";
}

ArrivalPath generate(const ArrivalSpec& spec, double horizon, std::uint64_t seed) {
    if (auto why = validate_arrival(spec)) throw std::invalid_argument("arrival spec: " + *why);
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");

    ArrivalPath path;
    path.num_stations = spec.num_stations;
    path.horizon = horizon;
    path.regen_marks.push_back(0.0);
    if (horizon == 0.0) return path;

    if (const auto* m = std::get_if<IndependentRenewal>(&spec.model)) {
        const int designated = designated_coordinate(*m);
        for (int k = 0; k < spec.num_stations; ++k) {
            if (!m->interarrival[k]) continue;
            Rng rng = derive_stream(seed, {1, static_cast<std::uint64_t>(k)});
            if (k == designated)
                renewal_events(*m->interarrival[k], k, horizon, rng, &path.events, &path.regen_marks);
            else
                renewal_events(*m->interarrival[k], k, horizon, rng, &path.events);
        }
        sort_events(&path.events);
        return path;
    }

    if (const auto* m = std::get_if<SharedBurstPoisson>(&spec.model)) {
        for (int k = 0; k < spec.num_stations; ++k) {
            if (m->station_rate[k] <= 0.0) continue;
            Rng rng = derive_stream(seed, {1, static_cast<std::uint64_t>(k)});
            renewal_events(Distribution::exponential(m->station_rate[k]), k, horizon, rng,
                           &path.events);
        }
        if (m->burst_rate > 0.0) {
            Rng rng = derive_stream(seed, {2, 0});
            double t = 0.0;
            while (true) {
                t += -std::log(rng.uniform_pos()) / m->burst_rate;
                if (t > horizon) break;
                for (int k = 0; k < spec.num_stations; ++k) path.events.push_back({t, k, 1});
            }
        }
        sort_events(&path.events);
        // stationary independent increments: the unit grid regenerates
        for (double t = 1.0; t <= horizon; t += 1.0) path.regen_marks.push_back(t);
        return path;
    }

    if (const auto* m = std::get_if<MarkovModulatedPoisson>(&spec.model)) {
        Rng chain_rng = derive_stream(seed, {1, 0});
        Rng arr_rng = derive_stream(seed, {2, 0});
        const long s = m->generator.rows();
        long state = 0;
        double t = 0.0;
        while (t < horizon) {
            const double leave_rate = -m->generator(state, state);
            double sojourn_end = horizon;
            long next_state = state;
            if (leave_rate > 0.0) {
                double hold = -std::log(chain_rng.uniform_pos()) / leave_rate;
                // jump target from the embedded chain
                double u = chain_rng.uniform() * leave_rate;
                double acc = 0.0;
                next_state = -1;
                for (long j = 0; j < s; ++j) {
                    if (j == state) continue;
                    acc += m->generator(state, j);
                    if (u < acc) {
                        next_state = j;
                        break;
                    }
                }
                if (next_state < 0) {  // guard against roundoff on the last positive entry
                    for (long j = s - 1; j >= 0; --j)
                        if (j != state && m->generator(state, j) > 0.0) {
                            next_state = j;
                            break;
                        }
                }
                sojourn_end = std::min(horizon, t + hold);
            }
            for (int k = 0; k < spec.num_stations; ++k) {
                const double rate = m->state_rate(state, k);
                if (rate <= 0.0) continue;
                double at = t;
                while (true) {
                    at += -std::log(arr_rng.uniform_pos()) / rate;
                    if (at >= sojourn_end) break;
                    path.events.push_back({at, k, 1});
                }
            }
            if (leave_rate <= 0.0) break;  // absorbing state
            t = sojourn_end;
            if (t >= horizon) break;
            state = next_state;
            if (state == 0) path.regen_marks.push_back(t);
        }
        sort_events(&path.events);
        return path;
    }

    const auto& m = std::get<BatchRenewal>(spec.model);
    Rng rng = derive_stream(seed, {1, 0});
    double t = 0.0;
    while (true) {
        t += m.interarrival.sample(rng);
        if (t > horizon) break;
        double u = rng.uniform();
        std::size_t idx = 0;
        double acc = 0.0;
        for (; idx + 1 < m.prob.size(); ++idx) {
            acc += m.prob[idx];
            if (u < acc) break;
        }
        const VecI& b = m.batch[idx];
        for (int k = 0; k < spec.num_stations; ++k)
            if (b[k] > 0) path.events.push_back({t, k, b[k]});
        path.regen_marks.push_back(t);
    }
    sort_events(&path.events);
    return path;
}

void analytic_lv(const ArrivalSpec& spec, Vec* intensity, Mat* cov_rate) {
    if (auto why = validate_arrival(spec)) throw std::invalid_argument("arrival spec: " + *why);
    const int k = spec.num_stations;
    intensity->setZero(k);
    cov_rate->setZero(k, k);

    if (const auto* m = std::get_if<IndependentRenewal>(&spec.model)) {
        for (int j = 0; j < k; ++j) {
            if (!m->interarrival[j]) continue;
            const double mean = m->interarrival[j]->mean();
            const double var = m->interarrival[j]->variance();
            (*intensity)[j] = 1.0 / mean;
            (*cov_rate)(j, j) = var / (mean * mean * mean);
        }
        return;
    }

    if (const auto* m = std::get_if<SharedBurstPoisson>(&spec.model)) {
        *intensity = m->station_rate.array() + m->burst_rate;
        *cov_rate = Mat::Constant(k, k, m->burst_rate);
        cov_rate->diagonal() += m->station_rate;
        return;
    }

    if (const auto* m = std::get_if<MarkovModulatedPoisson>(&spec.model)) {
        MmppDerived d = mmpp_derived(m->generator);
        *intensity = m->state_rate.transpose() * d.stationary;
        Mat weighted = d.stationary.asDiagonal() * d.deviation;  // pi_s * D(s,s')
        Mat cross = m->state_rate.transpose() * weighted * m->state_rate;
        *cov_rate = cross + cross.transpose();
        cov_rate->diagonal() += *intensity;
        return;
    }

    const auto& m = std::get<BatchRenewal>(spec.model);
    const double mean = m.interarrival.mean();
    const double var = m.interarrival.variance();
    Vec eb = Vec::Zero(k);
    Mat ebb = Mat::Zero(k, k);
    for (std::size_t i = 0; i < m.prob.size(); ++i) {
        Vec b = m.batch[i].cast<double>();
        eb += m.prob[i] * b;
        ebb += m.prob[i] * b * b.transpose();
    }
    Mat cov_b = ebb - eb * eb.transpose();
    *intensity = eb / mean;
    *cov_rate = cov_b / mean + (var / (mean * mean * mean)) * eb * eb.transpose();
}

LvEstimate estimate_lv(const ArrivalPath& path) {
    const int k = path.num_stations;
    const auto& marks = path.regen_marks;
    const int cycles = static_cast<int>(marks.size()) - 1;
    if (cycles < 30) {
        std::ostringstream msg;
        msg << "insufficient regeneration cycles: have " << std::max(cycles, 0) << ", need >= 30";
        throw std::invalid_argument(msg.str());
    }

    // cycle i covers (marks[i-1], marks[i]]; events after the last mark are
    // the incomplete cycle and are discarded
    Mat incr = Mat::Zero(cycles, k);
    for (const ArrivalEvent& e : path.events) {
        if (e.time > marks.back()) continue;
        const auto it = std::lower_bound(marks.begin(), marks.end(), e.time);
        const int idx = static_cast<int>(it - marks.begin());
        if (idx >= 1) incr(idx - 1, e.station) += static_cast<double>(e.batch);
    }

    const double total_time = marks.back();
    LvEstimate est;
    est.cycles = cycles;
    est.intensity = incr.colwise().sum().transpose() / total_time;

    Mat centered(cycles, k);
    for (int i = 0; i < cycles; ++i) {
        const double tau = marks[i + 1] - marks[i];
        centered.row(i) = incr.row(i) - tau * est.intensity.transpose();
    }
    est.cov_rate = centered.transpose() * centered / total_time;

    est.intensity_radius.resize(k);
    for (int j = 0; j < k; ++j)
        est.intensity_radius[j] = kZ95 * std::sqrt(std::max(0.0, est.cov_rate(j, j)) / total_time);

    est.cov_radius.resize(k, k);
    const double n = static_cast<double>(cycles);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            double mean_w = 0.0, var_w = 0.0;
            for (int i = 0; i < cycles; ++i) mean_w += centered(i, a) * centered(i, b);
            mean_w /= n;
            for (int i = 0; i < cycles; ++i) {
                const double d = centered(i, a) * centered(i, b) - mean_w;
                var_w += d * d;
            }
            var_w /= std::max(1.0, n - 1.0);
            est.cov_radius(a, b) = kZ95 * std::sqrt(var_w * n) / total_time;
        }
    }
    return est;
}

VecI ArrivalPath::total_counts() const {
    VecI counts = VecI::Zero(num_stations);
    for (const ArrivalEvent& e : events) counts[e.station] += e.batch;
    return counts;
}

void write_arrival_csv(const ArrivalPath& path, std::ostream& out) {
    out << "t,station,batch\n";
    for (const ArrivalEvent& e : path.events)
        out << fmt_g17(e.time) << ',' << e.station << ',' << e.batch << '\n';
}

}  // namespace jacksim
