// Command-line front door: validate | analyze | simulate | rbm | compare.
// Every output file starts with a header comment carrying the config hash and
// the root seed, so results are traceable and reruns are byte-comparable.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "jacksim/analysis.hpp"
#include "jacksim/config.hpp"
#include "jacksim/format.hpp"
#include "jacksim/rbm.hpp"
#include "jacksim/sim.hpp"
#include "jacksim/verify.hpp"

using namespace jacksim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Analyzed {
    NetworkSpec spec;
    EnvDerived envd;
    Vec intensity;
    Mat cov_rate;
    TrafficSolution traffic;
    RbmParams params;
};

// Loads and fully analyzes a config; prints the validation report and returns
// nothing when the spec is structurally invalid.
std::optional<Analyzed> load_and_analyze(const std::string& config, bool quiet_on_pass) {
    Analyzed a;
    a.spec = load_network(config);
    ValidationReport rep = validate(a.spec);
    if (!rep.ok()) {
        std::cout << "validation: FAIL\n";
        for (const auto& f : rep.failures) std::cout << "  - " << f << "\n";
        return std::nullopt;
    }
    if (!quiet_on_pass) {
        std::cout << "validation: PASS (" << a.spec.num_stations
                  << " stations, spectral radius " << fmt_g17(rep.spectral_radius) << ")\n";
    }
    a.envd = env_derived(a.spec);
    analytic_lv(a.spec.arrival, &a.intensity, &a.cov_rate);
    a.traffic = solve_traffic(a.spec, a.envd, a.intensity);
    a.params = rbm_params(a.spec, a.envd, a.traffic, a.intensity, a.cov_rate);
    return a;
}

std::ofstream open_output(const std::string& dir, const std::string& name,
                          const NetworkSpec& spec, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char head[64];
    std::snprintf(head, sizeof head, "# config_hash=%016llx root_seed=%llu\n",
                  static_cast<unsigned long long>(config_hash(spec)),
                  static_cast<unsigned long long>(seed));
    out << head;
    std::cout << "wrote " << path << "\n";
    return out;
}

void print_analysis(const Analyzed& a, const std::string& out_dir, std::uint64_t seed) {
    const int k = a.spec.num_stations;
    std::cout << "station  gamma        rho          class                throughput\n";
    Vec thr = a.traffic.throughput(a.spec, a.envd);
    for (int j = 0; j < k; ++j) {
        std::printf("%-8d %-12.6g %-12.6g %-20s %-12.6g\n", j + 1, a.traffic.gross_rate[j],
                    a.traffic.traffic_coeff[j], station_class_name(a.traffic.station_class[j]),
                    thr[j]);
    }
    std::cout << "drift b:";
    for (int j = 0; j < k; ++j) std::cout << ' ' << fmt_g17(a.params.drift[j]);
    std::cout << "\ncovariance Gamma:\n";
    for (int i = 0; i < k; ++i) {
        std::cout << " ";
        for (int j = 0; j < k; ++j) std::cout << ' ' << fmt_g17(a.params.covariance(i, j));
        std::cout << "\n";
    }

    if (!out_dir.empty()) {
        std::ofstream out = open_output(out_dir, "analysis.csv", a.spec, seed);
        out << "station,class,gamma,rho,throughput,drift";
        for (int j = 1; j <= k; ++j) out << ",cov_" << j;
        out << '\n';
        for (int j = 0; j < k; ++j) {
            out << j + 1 << ',' << station_class_name(a.traffic.station_class[j]) << ','
                << fmt_g17(a.traffic.gross_rate[j]) << ',' << fmt_g17(a.traffic.traffic_coeff[j])
                << ',' << fmt_g17(thr[j]) << ',' << fmt_g17(a.params.drift[j]);
            for (int i = 0; i < k; ++i) out << ',' << fmt_g17(a.params.covariance(j, i));
            out << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open Jackson networks with unreliable servers: simulation and "
                 "heavy-traffic diffusion analysis"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    auto* validate_cmd = app.add_subcommand("validate", "check every structural assumption");
    validate_cmd->add_option("config", config, "network config (json)")->required();

    auto* analyze_cmd =
        app.add_subcommand("analyze", "traffic solution, bottleneck classes, RBM parameters");
    analyze_cmd->add_option("config", config)->required();
    analyze_cmd->add_option("--out", out_dir, "output directory for analysis.csv");

    double horizon = 0.0, sample_dt = 1.0;
    auto* simulate_cmd = app.add_subcommand("simulate", "event-driven run, trajectory to csv");
    simulate_cmd->add_option("config", config)->required();
    simulate_cmd->add_option("--horizon", horizon, "run length")->required();
    simulate_cmd->add_option("--sample-dt", sample_dt, "output grid step");
    simulate_cmd->add_option("--seed", seed, "root seed");
    simulate_cmd->add_option("--out", out_dir, "output directory");

    double rbm_horizon = 1.0, rbm_dt = 1e-2;
    std::vector<double> w0;
    auto* rbm_cmd = app.add_subcommand("rbm", "sample the fitted reflected Brownian motion");
    rbm_cmd->add_option("config", config)->required();
    rbm_cmd->add_option("--horizon", rbm_horizon, "path length");
    rbm_cmd->add_option("--dt", rbm_dt, "grid step");
    rbm_cmd->add_option("--w0", w0, "start point (defaults to zero)");
    rbm_cmd->add_option("--seed", seed, "root seed");
    rbm_cmd->add_option("--out", out_dir, "output directory");

    double compare_t = 1.0;
    std::vector<double> scales{100.0, 1000.0};
    int reps = 200;
    auto* compare_cmd = app.add_subcommand(
        "compare", "diffusion-scaling comparison of the network against its RBM");
    compare_cmd->add_option("config", config)->required();
    compare_cmd->add_option("--T", compare_t, "scaled horizon");
    compare_cmd->add_option("--scales", scales, "scaling factors n")->delimiter(',');
    compare_cmd->add_option("--reps", reps, "replications per scale");
    compare_cmd->add_option("--seed", seed, "root seed");
    compare_cmd->add_option("--threads", threads, "worker threads (results identical for any value)");
    compare_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage error
        return kExitRuntime;
    }

    try {
        if (validate_cmd->parsed()) {
            NetworkSpec spec = load_network(config);
            ValidationReport rep = validate(spec);
            if (rep.ok()) {
                std::cout << "validation: PASS (" << spec.num_stations
                          << " stations, spectral radius " << fmt_g17(rep.spectral_radius) << ")\n";
                return kExitOk;
            }
            std::cout << "validation: FAIL\n";
            for (const auto& f : rep.failures) std::cout << "  - " << f << "\n";
            return kExitValidation;
        }

        if (analyze_cmd->parsed()) {
            auto a = load_and_analyze(config, false);
            if (!a) return kExitValidation;
            print_analysis(*a, out_dir, seed);
            return kExitOk;
        }

        if (simulate_cmd->parsed()) {
            if (!(horizon > 0.0)) {
                std::cout << "precondition violated: --horizon must be > 0\n";
                return kExitValidation;
            }
            if (!(sample_dt > 0.0)) {
                std::cout << "precondition violated: --sample-dt must be > 0\n";
                return kExitValidation;
            }
            auto a = load_and_analyze(config, true);
            if (!a) return kExitValidation;
            SimPath path = simulate(a->spec, horizon, sample_dt, seed);
            std::ofstream out = open_output(out_dir, "simpath.csv", a->spec, seed);
            write_sim_csv(path, out);
            std::cout << "flow identity violation: " << flow_identity_check(path)
                      << ", busy/on violation: " << fmt_g17(busy_minus_on_check(path)) << "\n";
            return kExitOk;
        }

        if (rbm_cmd->parsed()) {
            if (!(rbm_horizon > 0.0) || !(rbm_dt > 0.0)) {
                std::cout << "precondition violated: --horizon and --dt must be > 0\n";
                return kExitValidation;
            }
            auto a = load_and_analyze(config, true);
            if (!a) return kExitValidation;
            const int k = a->spec.num_stations;
            Vec start = Vec::Zero(k);
            if (!w0.empty()) {
                if (static_cast<int>(w0.size()) != k) {
                    std::cout << "precondition violated: --w0 needs K entries\n";
                    return kExitValidation;
                }
                for (int j = 0; j < k; ++j) start[j] = w0[j];
            }
            const long steps = static_cast<long>(std::ceil(rbm_horizon / rbm_dt - 1e-9));
            DrivingPath w = sample_brownian(a->params.drift, a->params.covariance, start, steps,
                                            rbm_dt, derive_seed(seed, {2}));
            ReflectedPath z = reflect(w, a->spec.routing);
            std::ofstream out = open_output(out_dir, "rbm_path.csv", a->spec, seed);
            write_reflected_csv(z, out);
            return kExitOk;
        }

        if (compare_cmd->parsed()) {
            if (reps < 2 || !(compare_t > 0.0)) {
                std::cout << "precondition violated: --reps >= 2 and --T > 0\n";
                return kExitValidation;
            }
            auto a = load_and_analyze(config, true);
            if (!a) return kExitValidation;
            ScaleOptions opts;
            opts.threads = threads;
            ScalingReport rep =
                scaled_compare(a->spec, a->params, compare_t, scales, reps, seed, opts);
            {
                std::ofstream out = open_output(out_dir, "compare.csv", a->spec, seed);
                write_scaling_csv(rep, out);
            }
            {
                std::ofstream out = open_output(out_dir, "compare_long.csv", a->spec, seed);
                write_scaling_long_csv(rep, out);
            }
            {
                std::ofstream out = open_output(out_dir, "compare_summary.txt", a->spec, seed);
                std::ostringstream text;
                write_scaling_summary(rep, text);
                out << text.str();
                std::cout << text.str();
            }
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cout << "precondition violated: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
