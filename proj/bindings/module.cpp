// Python bindings for the main operations: validation and analysis, arrival
// generation and estimation, event-driven simulation, RBM sampling and
// reflection, and the diffusion-scale comparison.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jacksim/analysis.hpp"
#include "jacksim/config.hpp"
#include "jacksim/env.hpp"
#include "jacksim/rbm.hpp"
#include "jacksim/sim.hpp"
#include "jacksim/stats.hpp"
#include "jacksim/verify.hpp"

namespace py = pybind11;
using namespace jacksim;

PYBIND11_MODULE(_jacksim, m) {
    m.doc() = "Jackson networks with unreliable servers: simulation and heavy-traffic "
              "RBM approximation";

    py::enum_<DistFamily>(m, "DistFamily")
        .value("exponential", DistFamily::Exponential)
        .value("erlang", DistFamily::Erlang)
        .value("deterministic", DistFamily::Deterministic)
        .value("lognormal", DistFamily::Lognormal)
        .value("uniform", DistFamily::Uniform);

    py::class_<Distribution>(m, "Distribution")
        .def_static("exponential", &Distribution::exponential, py::arg("rate"))
        .def_static("erlang", &Distribution::erlang, py::arg("shape"), py::arg("rate"))
        .def_static("deterministic", &Distribution::deterministic, py::arg("value"))
        .def_static("lognormal", &Distribution::lognormal, py::arg("mu"), py::arg("sigma"))
        .def_static("uniform", &Distribution::uniform, py::arg("lo"), py::arg("hi"))
        .def_readonly("family", &Distribution::family)
        .def("mean", &Distribution::mean)
        .def("variance", &Distribution::variance)
        .def("__repr__", [](const Distribution& d) {
            std::ostringstream out;
            out << "Distribution(" << dist_family_name(d.family) << ", " << d.p1 << ", " << d.p2
                << ")";
            return out.str();
        });

    py::class_<StationSpec>(m, "StationSpec")
        .def_static("make", &StationSpec::make, py::arg("service"), py::arg("on"), py::arg("off"))
        .def_static("reliable", &StationSpec::reliable, py::arg("service"))
        .def_readwrite("service_rate", &StationSpec::service_rate)
        .def_readwrite("service_var", &StationSpec::service_var)
        .def_readwrite("on_mean", &StationSpec::on_mean)
        .def_readwrite("on_var", &StationSpec::on_var)
        .def_readwrite("off_mean", &StationSpec::off_mean)
        .def_readwrite("off_var", &StationSpec::off_var);

    py::class_<ArrivalSpec>(m, "ArrivalSpec")
        .def_static("poisson", &ArrivalSpec::poisson, py::arg("rates"))
        .def_readonly("num_stations", &ArrivalSpec::num_stations);

    py::class_<NetworkSpec>(m, "NetworkSpec")
        .def(py::init<>())
        .def_readwrite("num_stations", &NetworkSpec::num_stations)
        .def_readwrite("stations", &NetworkSpec::stations)
        .def_readwrite("routing", &NetworkSpec::routing)
        .def_readwrite("arrival", &NetworkSpec::arrival)
        .def_readwrite("initial_queue", &NetworkSpec::initial_queue);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("failures", &ValidationReport::failures)
        .def_readonly("spectral_radius", &ValidationReport::spectral_radius)
        .def("ok", &ValidationReport::ok)
        .def("__repr__", [](const ValidationReport& r) {
            return r.ok() ? std::string("<ValidationReport PASS>")
                          : "<ValidationReport FAIL: " + std::to_string(r.failures.size()) +
                                " violations>";
        });

    py::class_<EnvDerived>(m, "EnvDerived")
        .def_readonly("on_fraction", &EnvDerived::on_fraction)
        .def_readonly("env_var_rate", &EnvDerived::env_var_rate);

    py::enum_<StationClass>(m, "StationClass")
        .value("nonbottleneck", StationClass::Nonbottleneck)
        .value("balanced_bottleneck", StationClass::BalancedBottleneck)
        .value("strict_bottleneck", StationClass::StrictBottleneck);

    py::class_<TrafficSolution>(m, "TrafficSolution")
        .def_readonly("gross_rate", &TrafficSolution::gross_rate)
        .def_readonly("traffic_coeff", &TrafficSolution::traffic_coeff)
        .def_readonly("station_class", &TrafficSolution::station_class)
        .def_readonly("residual", &TrafficSolution::residual);

    py::class_<RbmParams>(m, "RbmParams")
        .def_readonly("drift", &RbmParams::drift)
        .def_readonly("covariance", &RbmParams::covariance)
        .def_readonly("reflection", &RbmParams::reflection);

    py::class_<ArrivalPath>(m, "ArrivalPath")
        .def_readonly("num_stations", &ArrivalPath::num_stations)
        .def_readonly("horizon", &ArrivalPath::horizon)
        .def_readonly("regen_marks", &ArrivalPath::regen_marks)
        .def("total_counts", &ArrivalPath::total_counts)
        .def("events", [](const ArrivalPath& p) {
            py::list out;
            for (const auto& e : p.events) out.append(py::make_tuple(e.time, e.station, e.batch));
            return out;
        });

    py::class_<LvEstimate>(m, "LvEstimate")
        .def_readonly("intensity", &LvEstimate::intensity)
        .def_readonly("cov_rate", &LvEstimate::cov_rate)
        .def_readonly("intensity_radius", &LvEstimate::intensity_radius)
        .def_readonly("cov_radius", &LvEstimate::cov_radius)
        .def_readonly("cycles", &LvEstimate::cycles);

    py::class_<SimPath>(m, "SimPath")
        .def_readonly("num_stations", &SimPath::num_stations)
        .def_readonly("horizon", &SimPath::horizon)
        .def_readonly("times", &SimPath::times)
        .def_readonly("queue", &SimPath::queue)
        .def_readonly("busy", &SimPath::busy)
        .def_readonly("on_time", &SimPath::on_time)
        .def_readonly("external", &SimPath::external)
        .def_readonly("saturated", &SimPath::saturated)
        .def_readonly("routed", &SimPath::routed);

    py::class_<DrivingPath>(m, "DrivingPath")
        .def_readonly("times", &DrivingPath::times)
        .def_readonly("values", &DrivingPath::values);

    py::class_<ReflectedPath>(m, "ReflectedPath")
        .def_readonly("times", &ReflectedPath::times)
        .def_readonly("z", &ReflectedPath::z)
        .def_readonly("y", &ReflectedPath::y)
        .def_readonly("sweeps", &ReflectedPath::sweeps);

    py::class_<ScaleResult>(m, "ScaleResult")
        .def_readonly("scale", &ScaleResult::scale)
        .def_readonly("reps", &ScaleResult::reps)
        .def_readonly("station_class", &ScaleResult::station_class)
        .def_readonly("ks_at_horizon", &ScaleResult::ks_at_horizon)
        .def_readonly("sup_ks_dist", &ScaleResult::sup_ks_dist)
        .def_readonly("sup_quantile_dist", &ScaleResult::sup_quantile_dist)
        .def_readonly("sup_mean_dist", &ScaleResult::sup_mean_dist)
        .def_readonly("ks_by_checkpoint", &ScaleResult::ks_by_checkpoint)
        .def_readonly("qdist_by_checkpoint", &ScaleResult::qdist_by_checkpoint);

    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("T", &ScalingReport::T)
        .def_readonly("root_seed", &ScalingReport::root_seed)
        .def_readonly("scales", &ScalingReport::scales);

    py::class_<LlnRow>(m, "LlnRow")
        .def_readonly("station", &LlnRow::station)
        .def_readonly("on_fraction_obs", &LlnRow::on_fraction_obs)
        .def_readonly("on_fraction_target", &LlnRow::on_fraction_target)
        .def_readonly("on_fraction_thresh", &LlnRow::on_fraction_thresh)
        .def_readonly("service_rate_obs", &LlnRow::service_rate_obs)
        .def_readonly("service_rate_target", &LlnRow::service_rate_target)
        .def_readonly("service_rate_thresh", &LlnRow::service_rate_thresh)
        .def_readonly("pass_", &LlnRow::pass);

    py::class_<RateDiagnostic>(m, "RateDiagnostic")
        .def_readonly("exponent", &RateDiagnostic::exponent)
        .def_readonly("intercept", &RateDiagnostic::intercept)
        .def_readonly("threshold", &RateDiagnostic::threshold)
        .def_readonly("pass_", &RateDiagnostic::pass);

    m.def("validate", &validate, py::arg("spec"));
    m.def("env_derived", &env_derived, py::arg("spec"));
    m.def("spectral_radius", &spectral_radius, py::arg("matrix"), py::arg("tol") = 1e-12,
          py::arg("max_iter") = 1'000'000);
    m.def("generate_arrivals", &generate, py::arg("spec"), py::arg("horizon"), py::arg("seed"));
    m.def(
        "analytic_lv",
        [](const ArrivalSpec& spec) {
            Vec intensity;
            Mat cov;
            analytic_lv(spec, &intensity, &cov);
            return py::make_tuple(intensity, cov);
        },
        py::arg("spec"));
    m.def("estimate_lv", &estimate_lv, py::arg("path"));
    m.def("simulate", &simulate, py::arg("spec"), py::arg("horizon"), py::arg("sample_dt"),
          py::arg("seed"));
    m.def("flow_identity_check", &flow_identity_check, py::arg("path"));
    m.def("busy_minus_on_check", &busy_minus_on_check, py::arg("path"));
    m.def(
        "solve_traffic",
        [](const NetworkSpec& spec, const EnvDerived& envd, const Vec& intensity, double tol) {
            return solve_traffic(spec, envd, intensity, tol);
        },
        py::arg("spec"), py::arg("envd"), py::arg("intensity"), py::arg("tol") = 1e-12);
    m.def("rbm_params", &rbm_params, py::arg("spec"), py::arg("envd"), py::arg("traffic"),
          py::arg("intensity"), py::arg("cov_rate"));
    m.def("sample_brownian", &sample_brownian, py::arg("drift"), py::arg("cov"), py::arg("w0"),
          py::arg("steps"), py::arg("dt"), py::arg("seed"));
    m.def("reflect", &reflect, py::arg("path"), py::arg("routing"), py::arg("tol") = 1e-12,
          py::arg("max_sweeps") = 100000);
    m.def(
        "scaled_compare",
        [](const NetworkSpec& spec, const RbmParams& params, double T,
           const std::vector<double>& scales, int reps, std::uint64_t seed, double rbm_dt,
           int threads) {
            ScaleOptions opts;
            opts.rbm_dt = rbm_dt;
            opts.threads = threads;
            return scaled_compare(spec, params, T, scales, reps, seed, opts);
        },
        py::arg("spec"), py::arg("params"), py::arg("T"), py::arg("scales"), py::arg("reps"),
        py::arg("seed"), py::arg("rbm_dt") = 1e-2, py::arg("threads") = 1);
    m.def("lln_checks", &lln_checks, py::arg("path"), py::arg("envd"), py::arg("spec"));
    m.def("rate_diagnostic", &rate_diagnostic, py::arg("sup_by_horizon"), py::arg("moment_order"));
    m.def("ks_distance", &ks_distance, py::arg("a"), py::arg("b"));
    m.def("network_from_json", &network_from_json, py::arg("text"));
    m.def("network_to_json", &network_to_json, py::arg("spec"));
    m.def("load_network", &load_network, py::arg("file"));
    m.def("config_hash", &config_hash, py::arg("spec"));
}
