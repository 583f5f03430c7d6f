#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "jacksim/network.hpp"

using namespace jacksim;

TEST_CASE("spectral radius on hand cases") {
    Mat single(1, 1);
    single << 0.0;
    CHECK(spectral_radius(single) == 0.0);

    Mat loop(1, 1);
    loop << 1.0;
    CHECK(spectral_radius(loop) == doctest::Approx(1.0).epsilon(1e-12));

    // nilpotent tandem: eigenvalues all zero
    Mat tandem(2, 2);
    tandem << 0, 1, 0, 0;
    CHECK(spectral_radius(tandem) == 0.0);

    // 2-cycle: sr = sqrt(ab)
    Mat cyc(2, 2);
    cyc << 0, 0.8, 0.45, 0;
    CHECK(spectral_radius(cyc) == doctest::Approx(std::sqrt(0.8 * 0.45)).epsilon(1e-10));
}

TEST_CASE("spectral radius matches a dense eigensolver on random matrices") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 1 + static_cast<int>(rng.uniform() * 6.0);
        Mat p = testutil::random_substochastic(rng, k, 1.4);
        Eigen::EigenSolver<Mat> eig(p);
        const double want = eig.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(spectral_radius(p) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("validate: single station with empty routing passes") {
    NetworkSpec spec = testutil::mm1_reliable(0.5, 1.0);
    ValidationReport rep = validate(spec);
    CHECK(rep.ok());
    CHECK(rep.spectral_radius == 0.0);
}

TEST_CASE("validate: tandem routing is nilpotent") {
    ValidationReport rep = validate(testutil::tandem2());
    CHECK(rep.ok());
    CHECK(rep.spectral_radius == 0.0);
}

TEST_CASE("validate: customer that never leaves is rejected") {
    NetworkSpec spec = testutil::mm1_reliable(0.5, 1.0);
    spec.routing(0, 0) = 1.0;
    ValidationReport rep = validate(spec);
    CHECK(!rep.ok());
    CHECK(rep.spectral_radius == doctest::Approx(1.0));
}

TEST_CASE("validate: stochastic routing passes row sums but fails the spectral check") {
    NetworkSpec spec = testutil::tandem2();
    spec.routing << 0.0, 1.0, 1.0, 0.0;  // every row sums to exactly 1
    ValidationReport rep = validate(spec);
    CHECK(!rep.ok());
    CHECK(rep.spectral_radius >= 1.0 - 1e-9);
}

TEST_CASE("validate: declared moments must match the distribution") {
    NetworkSpec spec = testutil::mm1_reliable(0.5, 1.0);
    spec.stations[0].service_rate = 1.5;  // dist says 1.0
    CHECK(!validate(spec).ok());

    spec = testutil::mm1_reliable(0.5, 1.0);
    spec.stations[0].on_var = 0.25;  // deterministic ON has zero variance
    CHECK(!validate(spec).ok());
}

TEST_CASE("validate: reliable server needs OFF degenerate at zero") {
    NetworkSpec spec = testutil::mm1_unreliable(1.0);
    spec.stations[0].off_mean = 0.0;
    spec.stations[0].off_var = 0.0;  // but off_dist still exponential
    CHECK(!validate(spec).ok());
}

TEST_CASE("validate: zero arrival intensity is rejected") {
    NetworkSpec spec = testutil::mm1_reliable(0.5, 1.0);
    spec.arrival = ArrivalSpec::poisson(Vec::Zero(1));
    CHECK(!validate(spec).ok());
}

TEST_CASE("validate accepts random in-contract specs and rejects scaled-up routing") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng);
        ValidationReport rep = validate(spec);
        CHECK(rep.ok());
        CHECK(rep.spectral_radius < 1.0);

        // push one row sum above 1: must fail
        NetworkSpec bad = spec;
        bad.routing.row(0).setConstant(1.2 / spec.num_stations);
        CHECK(!validate(bad).ok());
    }
}

TEST_CASE("env_derived hand values") {
    // a = b = 1, s2 = d2 = 1 (exponential ON/OFF)
    NetworkSpec spec = testutil::mm1_unreliable(1.0);
    EnvDerived envd = env_derived(spec);
    CHECK(envd.on_fraction[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(envd.env_var_rate[0] == doctest::Approx(0.25).epsilon(1e-12));

    // reliable: alpha = 1, D = 0
    envd = env_derived(testutil::mm1_reliable(0.5, 1.0));
    CHECK(envd.on_fraction[0] == 1.0);
    CHECK(envd.env_var_rate[0] == 0.0);

    // a=2, b=1, s2=0, d2=3 -> alpha = 2/3, D = 12/27
    NetworkSpec mixed;
    mixed.num_stations = 1;
    const double ls = std::sqrt(std::log(4.0));  // lognormal with mean 1, variance 3
    mixed.stations.push_back(StationSpec::make(Distribution::exponential(1.0),
                                               Distribution::deterministic(2.0),
                                               Distribution::lognormal(-0.5 * ls * ls, ls)));
    mixed.routing = Mat::Zero(1, 1);
    mixed.arrival = ArrivalSpec::poisson(Vec::Constant(1, 1.0));
    REQUIRE(validate(mixed).ok());
    EnvDerived e2 = env_derived(mixed);
    CHECK(e2.on_fraction[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(e2.env_var_rate[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("env_derived scale covariance: (a,b) -> c(a,b), vars -> c^2 vars") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        NetworkSpec spec = testutil::random_spec(rng, 4);
        const double c = 0.5 + 3.0 * rng.uniform();
        NetworkSpec scaled = spec;
        for (auto& st : scaled.stations) {
            st.on_mean *= c;
            st.off_mean *= c;
            st.on_var *= c * c;
            st.off_var *= c * c;
        }
        EnvDerived base = env_derived(spec);
        EnvDerived after = env_derived(scaled);
        for (int j = 0; j < spec.num_stations; ++j) {
            CHECK(after.on_fraction[j] == doctest::Approx(base.on_fraction[j]).epsilon(1e-12));
            CHECK(after.env_var_rate[j] ==
                  doctest::Approx(c * base.env_var_rate[j]).epsilon(1e-12));
        }
    }
}
