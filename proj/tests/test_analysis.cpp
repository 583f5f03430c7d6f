#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "jacksim/analysis.hpp"

using namespace jacksim;

TEST_CASE("traffic: no feedback means gamma = lambda") {
    NetworkSpec spec = testutil::mm1_unreliable(0.7);
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    CHECK(sol.gross_rate[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(sol.traffic_coeff[0] == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(sol.residual < 1e-10);
}

TEST_CASE("traffic: tandem hand substitution") {
    NetworkSpec spec = testutil::tandem2();  // mu = (2,2), reliable, lambda = (1,0)
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    CHECK(sol.gross_rate[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.gross_rate[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.traffic_coeff[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.traffic_coeff[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.station_class[0] == StationClass::Nonbottleneck);
    CHECK(sol.station_class[1] == StationClass::Nonbottleneck);
}

TEST_CASE("traffic: upstream strict bottleneck caps the downstream flow") {
    NetworkSpec spec = testutil::tandem2(0.5, 2.0);  // station 1 capacity 0.5 < lambda 1
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    CHECK(sol.gross_rate[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.gross_rate[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.traffic_coeff[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(sol.station_class[0] == StationClass::StrictBottleneck);
    CHECK(sol.station_class[1] == StationClass::Nonbottleneck);
}

TEST_CASE("traffic: solution is independent of the starting point") {
    Rng rng(808);
    for (int trial = 0; trial < 30; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng);
        EnvDerived envd = env_derived(spec);
        Vec lambda;
        Mat v;
        analytic_lv(spec.arrival, &lambda, &v);
        TrafficSolution a = solve_traffic(spec, envd, lambda);
        TrafficSolution b = solve_traffic(spec, envd, lambda, 1e-12,
                                          Vec(lambda.array() + 50.0));
        CHECK((a.gross_rate - b.gross_rate).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("traffic: damped-iteration oracle agrees on random specs") {
    Rng rng(909);
    for (int trial = 0; trial < 40; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng);
        EnvDerived envd = env_derived(spec);
        Vec lambda;
        Mat v;
        analytic_lv(spec.arrival, &lambda, &v);
        TrafficSolution sol = solve_traffic(spec, envd, lambda);
        Vec oracle = testutil::traffic_oracle(spec, envd, lambda, 0.5, 20000);
        CHECK((sol.gross_rate - oracle).lpNorm<Eigen::Infinity>() < 1e-8);
        CHECK(sol.residual < 1e-10);
    }
}

TEST_CASE("rbm params: reliable M/M/1 reduces to the classical coefficients") {
    const double lambda_rate = 0.8, mu = 1.0;
    NetworkSpec spec = testutil::mm1_reliable(lambda_rate, mu);
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    // Gamma = V + sigma^2 mu^3 rho = lambda + lambda = 2 lambda; drift = lambda - mu
    CHECK(params.covariance(0, 0) == doctest::Approx(2.0 * lambda_rate).epsilon(1e-12));
    CHECK(params.drift[0] == doctest::Approx(lambda_rate - mu).epsilon(1e-12));
    CHECK(params.reflection(0, 0) == 1.0);
}

TEST_CASE("rbm params: P = 0 kills the routing term") {
    NetworkSpec spec = testutil::mm1_unreliable(0.9);
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    // K=1 unreliable: Gamma = V + (sigma^2 mu^3 alpha + mu^2 D) rho
    const double expect = 0.9 + (0.25 * 8.0 * 0.5 + 4.0 * 0.25) * 0.9;
    CHECK(params.covariance(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(params.drift[0] == doctest::Approx(0.9 - 1.0).epsilon(1e-12));
}

TEST_CASE("rbm params: deterministic service, exponential ON/OFF hand value") {
    // sigma^2 = 0, a=b=1 exponential: Gamma = V + mu^2 * 0.25 * rho
    NetworkSpec spec;
    spec.num_stations = 1;
    spec.stations.push_back(StationSpec::make(Distribution::deterministic(0.5),
                                              Distribution::exponential(1.0),
                                              Distribution::exponential(1.0)));
    spec.routing = Mat::Zero(1, 1);
    spec.arrival = ArrivalSpec::poisson(Vec::Constant(1, 0.8));
    EnvDerived envd = env_derived(spec);
    Vec lambda;
    Mat v;
    analytic_lv(spec.arrival, &lambda, &v);
    TrafficSolution sol = solve_traffic(spec, envd, lambda);
    RbmParams params = rbm_params(spec, envd, sol, lambda, v);
    const double rho = 0.8;  // capacity alpha mu = 1
    CHECK(params.covariance(0, 0) == doctest::Approx(0.8 + 4.0 * 0.25 * rho).epsilon(1e-12));
}

TEST_CASE("rbm params: reliable case matches the independent evaluator") {
    Rng rng(4040);
    for (int trial = 0; trial < 25; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng);
        for (auto& st : spec.stations) {  // force every server reliable
            st.off_mean = 0.0;
            st.off_var = 0.0;
            st.off_dist = Distribution::deterministic(0.0);
            st.on_dist = Distribution::deterministic(1.0);
            st.on_mean = 1.0;
            st.on_var = 0.0;
        }
        EnvDerived envd = env_derived(spec);
        Vec lambda;
        Mat v;
        analytic_lv(spec.arrival, &lambda, &v);
        TrafficSolution sol = solve_traffic(spec, envd, lambda);
        RbmParams params = rbm_params(spec, envd, sol, lambda, v);
        Mat oracle = testutil::reliable_jackson_cov(spec, sol, v);
        CHECK((params.covariance - oracle).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("rbm params: covariance symmetric positive semidefinite") {
    Rng rng(646);
    for (int trial = 0; trial < 30; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng);
        EnvDerived envd = env_derived(spec);
        Vec lambda;
        Mat v;
        analytic_lv(spec.arrival, &lambda, &v);
        TrafficSolution sol = solve_traffic(spec, envd, lambda);
        RbmParams params = rbm_params(spec, envd, sol, lambda, v);
        CHECK((params.covariance - params.covariance.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
        Eigen::SelfAdjointEigenSolver<Mat> eig(params.covariance);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}
