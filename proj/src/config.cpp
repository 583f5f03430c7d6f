#include "jacksim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jacksim {

namespace {

using nlohmann::json;

json dist_to_json(const Distribution& d) {
    json out;
    switch (d.family) {
        case DistFamily::Exponential:
            out = {{"family", "exponential"}, {"rate", d.p1}};
            break;
        case DistFamily::Erlang:
            out = {{"family", "erlang"}, {"rate", d.p1}, {"shape", static_cast<int>(d.p2)}};
            break;
        case DistFamily::Deterministic:
            out = {{"family", "deterministic"}, {"value", d.p1}};
            break;
        case DistFamily::Lognormal:
            out = {{"family", "lognormal"}, {"mu", d.p1}, {"sigma", d.p2}};
            break;
        case DistFamily::Uniform:
            out = {{"family", "uniform"}, {"lo", d.p1}, {"hi", d.p2}};
            break;
    }
    return out;
}

Distribution dist_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential") return Distribution::exponential(j.at("rate").get<double>());
    if (family == "erlang")
        return Distribution::erlang(j.at("shape").get<int>(), j.at("rate").get<double>());
    if (family == "deterministic") return Distribution::deterministic(j.at("value").get<double>());
    if (family == "lognormal")
        return Distribution::lognormal(j.at("mu").get<double>(), j.at("sigma").get<double>());
    if (family == "uniform")
        return Distribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    throw std::runtime_error("unknown distribution family: " + family);
}

json arrival_to_json(const ArrivalSpec& spec) {
    json out;
    if (const auto* m = std::get_if<IndependentRenewal>(&spec.model)) {
        out["family"] = "independent-renewal";
        json list = json::array();
        for (const auto& d : m->interarrival) list.push_back(d ? dist_to_json(*d) : json(nullptr));
        out["interarrival"] = list;
    } else if (const auto* m = std::get_if<SharedBurstPoisson>(&spec.model)) {
        out["family"] = "superposed-poisson-with-shared-bursts";
        out["station_rate"] = std::vector<double>(m->station_rate.begin(), m->station_rate.end());
        out["burst_rate"] = m->burst_rate;
    } else if (const auto* m = std::get_if<MarkovModulatedPoisson>(&spec.model)) {
        out["family"] = "markov-modulated-poisson";
        json gen = json::array(), rates = json::array();
        for (long i = 0; i < m->generator.rows(); ++i) {
            json row = json::array();
            for (long j = 0; j < m->generator.cols(); ++j) row.push_back(m->generator(i, j));
            gen.push_back(row);
        }
        for (long i = 0; i < m->state_rate.rows(); ++i) {
            json row = json::array();
            for (long j = 0; j < m->state_rate.cols(); ++j) row.push_back(m->state_rate(i, j));
            rates.push_back(row);
        }
        out["generator"] = gen;
        out["state_rate"] = rates;
    } else {
        const auto& br = std::get<BatchRenewal>(spec.model);
        out["family"] = "batch-renewal";
        out["interarrival"] = dist_to_json(br.interarrival);
        json atoms = json::array();
        for (std::size_t i = 0; i < br.prob.size(); ++i) {
            json atom;
            atom["prob"] = br.prob[i];
            atom["batch"] = std::vector<std::int64_t>(br.batch[i].begin(), br.batch[i].end());
            atoms.push_back(atom);
        }
        out["atoms"] = atoms;
    }
    return out;
}

ArrivalSpec arrival_from_json(const json& j, int k) {
    ArrivalSpec spec;
    spec.num_stations = k;
    const std::string family = j.at("family").get<std::string>();
    if (family == "independent-renewal") {
        IndependentRenewal m;
        for (const auto& entry : j.at("interarrival")) {
            if (entry.is_null()) m.interarrival.emplace_back(std::nullopt);
            else m.interarrival.emplace_back(dist_from_json(entry));
        }
        spec.model = std::move(m);
    } else if (family == "superposed-poisson-with-shared-bursts") {
        SharedBurstPoisson m;
        const auto rates = j.at("station_rate").get<std::vector<double>>();
        m.station_rate = Eigen::Map<const Vec>(rates.data(), rates.size());
        m.burst_rate = j.at("burst_rate").get<double>();
        spec.model = std::move(m);
    } else if (family == "markov-modulated-poisson") {
        MarkovModulatedPoisson m;
        const auto& gen = j.at("generator");
        const auto& rates = j.at("state_rate");
        const long s = static_cast<long>(gen.size());
        m.generator.resize(s, s);
        m.state_rate.resize(s, k);
        for (long i = 0; i < s; ++i)
            for (long c = 0; c < s; ++c) m.generator(i, c) = gen.at(i).at(c).get<double>();
        for (long i = 0; i < s; ++i)
            for (long c = 0; c < k; ++c) m.state_rate(i, c) = rates.at(i).at(c).get<double>();
        spec.model = std::move(m);
    } else if (family == "batch-renewal") {
        BatchRenewal m;
        m.interarrival = dist_from_json(j.at("interarrival"));
        for (const auto& atom : j.at("atoms")) {
            m.prob.push_back(atom.at("prob").get<double>());
            const auto b = atom.at("batch").get<std::vector<std::int64_t>>();
            m.batch.push_back(Eigen::Map<const VecI>(b.data(), b.size()));
        }
        spec.model = std::move(m);
    } else {
        throw std::runtime_error("unknown arrival family: " + family);
    }
    return spec;
}

}  // namespace

NetworkSpec network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    try {
        NetworkSpec spec;
        const auto& stations = j.at("stations");
        spec.num_stations = static_cast<int>(stations.size());
        for (const auto& s : stations) {
            StationSpec st;
            const auto& service = s.at("service");
            st.service_dist = dist_from_json(service.at("dist"));
            st.service_rate = service.at("rate").get<double>();
            st.service_var = service.at("var").get<double>();
            const auto& on = s.at("on");
            st.on_dist = dist_from_json(on.at("dist"));
            st.on_mean = on.at("mean").get<double>();
            st.on_var = on.at("var").get<double>();
            const auto& off = s.at("off");
            st.off_dist = dist_from_json(off.at("dist"));
            st.off_mean = off.at("mean").get<double>();
            st.off_var = off.at("var").get<double>();
            spec.stations.push_back(st);
        }
        const int k = spec.num_stations;
        spec.routing.resize(k, k);
        const auto& routing = j.at("routing");
        for (int i = 0; i < k; ++i)
            for (int c = 0; c < k; ++c) spec.routing(i, c) = routing.at(i).at(c).get<double>();
        spec.arrival = arrival_from_json(j.at("arrival"), k);
        if (j.contains("initial_queue")) {
            const auto q = j.at("initial_queue").get<std::vector<std::int64_t>>();
            spec.initial_queue = Eigen::Map<const VecI>(q.data(), q.size());
        }
        return spec;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config structure error: ") + e.what());
    }
}

std::string network_to_json(const NetworkSpec& spec) {
    json out;
    json stations = json::array();
    for (const auto& st : spec.stations) {
        json s;
        s["service"] = {{"dist", dist_to_json(st.service_dist)},
                        {"rate", st.service_rate},
                        {"var", st.service_var}};
        s["on"] = {{"dist", dist_to_json(st.on_dist)}, {"mean", st.on_mean}, {"var", st.on_var}};
        s["off"] = {{"dist", dist_to_json(st.off_dist)}, {"mean", st.off_mean}, {"var", st.off_var}};
        stations.push_back(s);
    }
    out["stations"] = stations;
    json routing = json::array();
    for (int i = 0; i < spec.num_stations; ++i) {
        json row = json::array();
        for (int c = 0; c < spec.num_stations; ++c) row.push_back(spec.routing(i, c));
        routing.push_back(row);
    }
    out["routing"] = routing;
    out["arrival"] = arrival_to_json(spec.arrival);
    if (spec.initial_queue.size() > 0)
        out["initial_queue"] =
            std::vector<std::int64_t>(spec.initial_queue.begin(), spec.initial_queue.end());
    return out.dump(2) + "\n";
}

NetworkSpec load_network(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file: " + file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

void save_network(const NetworkSpec& spec, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write config file: " + file);
    out << network_to_json(spec);
}

std::uint64_t config_hash(const NetworkSpec& spec) {
    const std::string canon = network_to_json(spec);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace jacksim
