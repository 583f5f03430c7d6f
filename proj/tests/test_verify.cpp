#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "jacksim/stats.hpp"
#include "jacksim/verify.hpp"

using namespace jacksim;

TEST_CASE("ks distance: equal samples give exactly zero") {
    std::vector<double> a = {0.3, 1.2, 1.2, 5.0, -2.0};
    CHECK(ks_distance(a, a) == 0.0);
}

TEST_CASE("ks distance: disjoint samples give one") {
    std::vector<double> a = {0.0, 1.0};
    std::vector<double> b = {5.0, 6.0};
    CHECK(ks_distance(a, b) == 1.0);
}

TEST_CASE("rate diagnostic recovers synthetic exponents") {
    std::vector<std::pair<double, double>> quarter, flat;
    for (double t : {1e2, 1e3, 1e4, 1e5}) {
        quarter.emplace_back(t, std::pow(t, 0.25));
        flat.emplace_back(t, 3.7);
    }
    RateDiagnostic d = rate_diagnostic(quarter, 4.0);
    CHECK(d.exponent == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(d.threshold == doctest::Approx(1.0 / 3.9 + 0.1).epsilon(1e-12));
    CHECK(d.pass);

    RateDiagnostic f = rate_diagnostic(flat, 4.0);
    CHECK(f.exponent == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.pass);
}

TEST_CASE("rate diagnostic preconditions") {
    std::vector<std::pair<double, double>> three = {{1e2, 1.0}, {1e3, 2.0}, {1e4, 3.0}};
    CHECK_THROWS_AS((void)rate_diagnostic(three, 4.0), std::invalid_argument);
    std::vector<std::pair<double, double>> narrow = {
        {100.0, 1.0}, {200.0, 1.0}, {300.0, 1.0}, {400.0, 1.0}};
    CHECK_THROWS_AS((void)rate_diagnostic(narrow, 4.0), std::invalid_argument);
}

TEST_CASE("saturated reliable deterministic server: renewal rate is exact at epochs") {
    NetworkSpec spec;
    spec.num_stations = 1;
    spec.stations.push_back(StationSpec::reliable(Distribution::deterministic(1.0)));
    spec.routing = Mat::Zero(1, 1);
    spec.arrival = ArrivalSpec::poisson(Vec::Constant(1, 1e-9));
    VecI q0(1);
    q0 << 100000;
    spec.initial_queue = q0;

    SimPath path = simulate(spec, 2000.0, 1.0, 3);
    // sample times are completion epochs: S(C(t))/t equals mu exactly there
    for (long i = 1; i < static_cast<long>(path.times.size()); ++i)
        CHECK(static_cast<double>(path.saturated(i, 0)) / path.times[i] == 1.0);
}

TEST_CASE("reliable balanced bottleneck: scaled marginal is close to the fitted rbm") {
    NetworkSpec spec = testutil::mm1_reliable(1.0, 1.0);  // rho = 1
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    CHECK(params.covariance(0, 0) == doctest::Approx(2.0));
    CHECK(params.drift[0] == doctest::Approx(0.0));

    ScaleOptions opts;
    opts.rbm_dt = 1e-3;
    ScalingReport rep = scaled_compare(spec, params, 1.0, {2500.0}, 400, 314159, opts);
    CHECK(rep.scales[0].station_class[0] == StationClass::BalancedBottleneck);
    CHECK(rep.scales[0].ks_at_horizon[0] < 0.15);  // the acceptance suite tightens this
}

TEST_CASE("lln checks on the saturated unreliable station") {
    NetworkSpec spec = testutil::mm1_unreliable(1.0);  // balanced bottleneck
    SimPath path = simulate(spec, 1e4, 100.0, 21);
    std::vector<LlnRow> rows = lln_checks(path, env_derived(spec), spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].on_fraction_target == doctest::Approx(0.5));
    CHECK(rows[0].service_rate_target == doctest::Approx(1.0));
    CHECK(std::abs(rows[0].on_fraction_obs - 0.5) < 0.02);
    CHECK(std::abs(rows[0].service_rate_obs - 1.0) < 0.05);
    CHECK(rows[0].pass);
}

TEST_CASE("lln checks: nonbottleneck uses the realized departure rate") {
    NetworkSpec spec = testutil::mm1_unreliable(0.5);  // rho = 0.5
    SimPath path = simulate(spec, 2e4, 200.0, 22);
    std::vector<LlnRow> rows = lln_checks(path, env_derived(spec), spec);
    CHECK(rows[0].service_rate_target == doctest::Approx(0.5));
    CHECK(rows[0].pass);
}

TEST_CASE("lln checks demand a long enough run") {
    NetworkSpec spec = testutil::mm1_unreliable(1.0);
    SimPath path = simulate(spec, 10.0, 1.0, 23);
    CHECK_THROWS_AS((void)lln_checks(path, env_derived(spec), spec), std::invalid_argument);
}

TEST_CASE("scaled compare: zero-arrival network collapses to the degenerate rbm") {
    NetworkSpec spec = testutil::mm1_unreliable(1.0);
    ArrivalSpec none;
    none.num_stations = 1;
    IndependentRenewal m;
    m.interarrival = {std::nullopt};
    none.model = std::move(m);
    spec.arrival = none;

    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    CHECK(params.covariance(0, 0) == 0.0);

    ScalingReport rep = scaled_compare(spec, params, 1.0, {4.0}, 16, 99);
    REQUIRE(rep.scales.size() == 1);
    CHECK(rep.scales[0].sup_quantile_dist[0] == 0.0);
    CHECK(rep.scales[0].sup_mean_dist[0] == 0.0);
    CHECK(rep.scales[0].ks_at_horizon[0] == 0.0);
}

TEST_CASE("scaled compare is reproducible and thread-count invariant") {
    NetworkSpec spec = testutil::mm1_unreliable(1.0);
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);

    ScaleOptions opts;
    opts.threads = 1;
    ScalingReport a = scaled_compare(spec, params, 1.0, {16.0}, 24, 1234, opts);
    opts.threads = 4;
    ScalingReport b = scaled_compare(spec, params, 1.0, {16.0}, 24, 1234, opts);
    CHECK(a.scales[0].ks_at_horizon[0] == b.scales[0].ks_at_horizon[0]);
    CHECK(a.scales[0].sup_quantile_dist[0] == b.scales[0].sup_quantile_dist[0]);
    CHECK(a.scales[0].lln_c_resid[0] == b.scales[0].lln_c_resid[0]);
}

TEST_CASE("scaled compare flags the strict bottleneck class") {
    NetworkSpec spec = testutil::tandem2(0.5, 2.0);
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    ScalingReport rep = scaled_compare(spec, params, 1.0, {16.0}, 8, 5);
    CHECK(rep.scales[0].station_class[0] == StationClass::StrictBottleneck);
    CHECK(rep.scales[0].station_class[1] == StationClass::Nonbottleneck);
}
