#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Oracles here must stay independent of the library code paths they check.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jacksim/analysis.hpp"
#include "jacksim/network.hpp"
#include "jacksim/rbm.hpp"
#include "jacksim/rng.hpp"

namespace testutil {

using namespace jacksim;

// Single unreliable station: exponential service at rate 2, exponential
// ON/OFF with means 1/1 (alpha = 1/2, D = 1/4), Poisson arrivals at
// `arrival_rate`. rho = arrival_rate with these numbers.
inline NetworkSpec mm1_unreliable(double arrival_rate) {
    NetworkSpec spec;
    spec.num_stations = 1;
    spec.stations.push_back(StationSpec::make(Distribution::exponential(2.0),
                                              Distribution::exponential(1.0),
                                              Distribution::exponential(1.0)));
    spec.routing = Mat::Zero(1, 1);
    spec.arrival = ArrivalSpec::poisson(Vec::Constant(1, arrival_rate));
    return spec;
}

// Reliable M/M/1: Poisson arrivals, exponential service.
inline NetworkSpec mm1_reliable(double arrival_rate, double service_rate) {
    NetworkSpec spec;
    spec.num_stations = 1;
    spec.stations.push_back(StationSpec::reliable(Distribution::exponential(service_rate)));
    spec.routing = Mat::Zero(1, 1);
    spec.arrival = ArrivalSpec::poisson(Vec::Constant(1, arrival_rate));
    return spec;
}

// Two stations in series, Poisson(1) into station 1, everything reliable.
inline NetworkSpec tandem2(double mu1 = 2.0, double mu2 = 2.0) {
    NetworkSpec spec;
    spec.num_stations = 2;
    spec.stations.push_back(StationSpec::reliable(Distribution::exponential(mu1)));
    spec.stations.push_back(StationSpec::reliable(Distribution::exponential(mu2)));
    spec.routing = Mat::Zero(2, 2);
    spec.routing(0, 1) = 1.0;
    Vec rates(2);
    rates << 1.0, 0.0;
    spec.arrival = ArrivalSpec::poisson(rates);
    return spec;
}

inline Mat random_substochastic(Rng& rng, int k, double max_row_sum = 0.9) {
    Mat p(k, k);
    for (int i = 0; i < k; ++i) {
        double row = 0.0;
        for (int j = 0; j < k; ++j) {
            p(i, j) = rng.uniform();
            row += p(i, j);
        }
        const double target = rng.uniform() * max_row_sum;
        if (row > 0.0)
            for (int j = 0; j < k; ++j) p(i, j) *= target / row;
    }
    return p;
}

inline Distribution random_positive_dist(Rng& rng, double mean_lo = 0.5, double mean_hi = 2.0) {
    const double m = mean_lo + (mean_hi - mean_lo) * rng.uniform();
    switch (static_cast<int>(rng.uniform() * 5.0)) {
        case 0: return Distribution::exponential(1.0 / m);
        case 1: {
            const int shape = 2 + static_cast<int>(rng.uniform() * 3.0);
            return Distribution::erlang(shape, shape / m);
        }
        case 2: return Distribution::deterministic(m);
        case 3: {
            const double sigma = 0.2 + 0.4 * rng.uniform();
            return Distribution::lognormal(std::log(m) - 0.5 * sigma * sigma, sigma);
        }
        default: return Distribution::uniform(0.2 * m, 1.8 * m);
    }
}

// Random arrival model covering all four families, dimension k.
inline ArrivalSpec random_arrival(Rng& rng, int k) {
    ArrivalSpec spec;
    spec.num_stations = k;
    const double u = rng.uniform();
    if (u < 0.5) {
        Vec rates(k);
        for (int j = 0; j < k; ++j) rates[j] = rng.uniform() < 0.25 ? 0.0 : 0.2 + 0.6 * rng.uniform();
        if (rates.maxCoeff() <= 0.0) rates[0] = 0.5;
        return ArrivalSpec::poisson(rates);
    }
    if (u < 0.7) {
        SharedBurstPoisson m;
        m.station_rate = Vec(k);
        for (int j = 0; j < k; ++j) m.station_rate[j] = 0.5 * rng.uniform();
        m.burst_rate = 0.05 + 0.25 * rng.uniform();
        spec.model = std::move(m);
        return spec;
    }
    if (u < 0.85) {
        MarkovModulatedPoisson m;
        const double q01 = 0.2 + rng.uniform(), q10 = 0.2 + rng.uniform();
        m.generator = Mat(2, 2);
        m.generator << -q01, q01, q10, -q10;
        m.state_rate = Mat(2, k);
        for (int j = 0; j < k; ++j) {
            m.state_rate(0, j) = rng.uniform();
            m.state_rate(1, j) = rng.uniform();
        }
        spec.model = std::move(m);
        return spec;
    }
    BatchRenewal m;
    m.interarrival = random_positive_dist(rng, 1.0, 3.0);
    VecI b1 = VecI::Zero(k), b2 = VecI::Zero(k);
    for (int j = 0; j < k; ++j) {
        b1[j] = static_cast<std::int64_t>(rng.uniform() * 2.0);
        b2[j] = 1 + static_cast<std::int64_t>(rng.uniform() * 2.0);
    }
    const double p = 0.3 + 0.4 * rng.uniform();
    m.prob = {p, 1.0 - p};
    m.batch = {b1, b2};
    spec.model = std::move(m);
    return spec;
}

// Random validated network: substochastic routing, mixed service families,
// mixed reliable/unreliable stations, arrivals from any built-in family.
inline NetworkSpec random_spec(Rng& rng, int max_k = 6) {
    const int k = 1 + static_cast<int>(rng.uniform() * max_k);
    NetworkSpec spec;
    spec.num_stations = k;
    for (int j = 0; j < k; ++j) {
        const Distribution service = random_positive_dist(rng, 0.4, 1.5);
        if (rng.uniform() < 0.3) {
            spec.stations.push_back(StationSpec::reliable(service));
        } else {
            const Distribution on = random_positive_dist(rng, 1.0, 4.0);
            const Distribution off = random_positive_dist(rng, 0.2, 1.0);
            spec.stations.push_back(StationSpec::make(service, on, off));
        }
    }
    spec.routing = random_substochastic(rng, k);
    spec.arrival = random_arrival(rng, k);
    return spec;
}

// Damped fixed-point oracle for the traffic equations; deliberately a
// different iteration than the production solver.
inline Vec traffic_oracle(const NetworkSpec& spec, const EnvDerived& envd, const Vec& intensity,
                          double damping = 0.5, long iters = 200000) {
    const int k = spec.num_stations;
    Vec cap(k);
    for (int j = 0; j < k; ++j) cap[j] = envd.on_fraction[j] * spec.stations[j].service_rate;
    Vec gamma = Vec::Zero(k);
    for (long it = 0; it < iters; ++it) {
        Vec mapped = intensity + spec.routing.transpose() * gamma.cwiseMin(cap);
        gamma = (1.0 - damping) * gamma + damping * mapped;
    }
    return gamma;
}

// Reliable-network covariance evaluator (alpha = 1, D = 0), coded in matrix
// form rather than the production entrywise loop.
inline Mat reliable_jackson_cov(const NetworkSpec& spec, const TrafficSolution& traffic,
                                const Mat& arrival_cov) {
    const int k = spec.num_stations;
    Mat gamma_cov = arrival_cov;
    for (int j = 0; j < k; ++j) {
        const double mu = spec.stations[j].service_rate;
        const double flow = std::min(traffic.gross_rate[j], mu);
        const double c = spec.stations[j].service_var * mu * mu * mu *
                         std::min(traffic.traffic_coeff[j], 1.0);
        Eigen::RowVectorXd row = spec.routing.row(j);
        gamma_cov += flow * (Mat(row.transpose().asDiagonal()) - row.transpose() * row);
        Eigen::RowVectorXd dir = row - Eigen::RowVectorXd::Unit(k, j);
        gamma_cov += c * dir.transpose() * dir;
    }
    return gamma_cov;
}

// Per-step linear-complementarity brute force for the discrete Skorokhod
// problem: at every grid point, enumerate active sets and solve the K x K
// system. Independent of the production sweep iteration.
inline ReflectedPath reflect_lcp_bruteforce(const DrivingPath& path, const Mat& routing) {
    const long n = path.values.rows();
    const long k = path.values.cols();
    const Mat m = (Mat::Identity(k, k) - routing).transpose();

    ReflectedPath out;
    out.times = path.times;
    out.y = Mat::Zero(n, k);
    out.z = Mat::Zero(n, k);

    Vec y_prev = Vec::Zero(k);
    for (long i = 0; i < n; ++i) {
        const Vec q = path.values.row(i).transpose() + m * y_prev;
        bool solved = false;
        for (unsigned mask = 0; mask < (1u << k) && !solved; ++mask) {
            std::vector<int> active;
            for (long j = 0; j < k; ++j)
                if (mask & (1u << j)) active.push_back(static_cast<int>(j));
            Vec delta = Vec::Zero(k);
            if (!active.empty()) {
                Mat sub(active.size(), active.size());
                Vec rhs(active.size());
                for (std::size_t a = 0; a < active.size(); ++a) {
                    rhs[a] = -q[active[a]];
                    for (std::size_t b = 0; b < active.size(); ++b)
                        sub(a, b) = m(active[a], active[b]);
                }
                Vec sol = sub.fullPivLu().solve(rhs);
                if (sol.minCoeff() < -1e-10) continue;
                for (std::size_t a = 0; a < active.size(); ++a) delta[active[a]] = std::max(0.0, sol[a]);
            }
            Vec z = q + m * delta;
            if (z.minCoeff() < -1e-10) continue;
            out.y.row(i) = (y_prev + delta).transpose();
            out.z.row(i) = z.cwiseMax(0.0).transpose();
            solved = true;
        }
        if (!solved) throw std::runtime_error("lcp brute force: no feasible active set");
        y_prev = out.y.row(i).transpose();
    }
    return out;
}

// Closed-form one-dimensional reflection: Y(t) = sup_{s<=t} (-W(s))+.
inline ReflectedPath reflect_1d_closed_form(const DrivingPath& path) {
    const long n = path.values.rows();
    ReflectedPath out;
    out.times = path.times;
    out.y.resize(n, 1);
    out.z.resize(n, 1);
    double running = 0.0;
    for (long i = 0; i < n; ++i) {
        running = std::max(running, -path.values(i, 0));
        out.y(i, 0) = running;
        out.z(i, 0) = path.values(i, 0) + running;
    }
    return out;
}

}  // namespace testutil
