#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "jacksim/analysis.hpp"
#include "jacksim/sim.hpp"

namespace jacksim {

struct ScaleOptions {
    double rbm_dt = 1e-2;   // reflected-path grid in scaled time
    int checkpoints = 10;   // evenly spaced fractions of the horizon
    int threads = 1;
};

struct ScaleResult {
    double scale = 0.0;
    int reps = 0;
    std::vector<StationClass> station_class;
    Vec ks_at_horizon;       // KS between Q(nT)/sqrt(n) and the fitted RBM at T
    Vec sup_ks_dist;         // sup over checkpoints of the marginal KS distance;
                             // scale-free, so its noise floor does not grow with
                             // the horizon and growth-rate regressions stay
                             // meaningful
    Vec sup_quantile_dist;   // max over checkpoints of the central-quantile
                             // transport distance between ensembles, in
                             // customers (estimator noise grows like sqrt(t))
    Vec sup_mean_dist;       // same with ensemble means
    Vec lln_c_resid;         // mean over reps of |C_j(t)/t - alpha_j| at the horizon
    Vec lln_s_resid;         // mean over reps of |S_j(C_j(t))/t - mu_j alpha_j|
    Mat ks_by_checkpoint;    // checkpoints x stations, feeds the long-format CSV
    Mat qdist_by_checkpoint;
};

struct ScalingReport {
    double T = 0.0;
    std::uint64_t root_seed = 0;
    int reps = 0;
    std::vector<ScaleResult> scales;
};

// Diffusion-scaling comparison: per scale n, simulates `reps` network paths to
// horizon nT plus matched (but independently seeded) RBM paths from `params`,
// and reports per-station marginal KS distances at the horizon and
// checkpoint-sup distribution distances. Nothing is coupled; only laws are
// compared.
ScalingReport scaled_compare(const NetworkSpec& spec, const RbmParams& params, double T,
                             const std::vector<double>& scales, int reps, std::uint64_t seed,
                             const ScaleOptions& opts = {});

struct LlnRow {
    int station = 0;
    double on_fraction_obs = 0.0;   // C_j(t)/t
    double on_fraction_target = 0.0;
    double on_fraction_thresh = 0.0;
    double service_rate_obs = 0.0;  // saturated or departure rate, per class
    double service_rate_target = 0.0;
    double service_rate_thresh = 0.0;
    bool pass = false;
};

// Law-of-large-numbers residuals for the environment and service renewals at
// the end of the run. Bottleneck stations check S_j(C_j(t))/t against
// mu_j alpha_j; nonbottlenecks check the realized departure rate against
// rho_j mu_j alpha_j. Thresholds are 4-sigma central-limit widths.
std::vector<LlnRow> lln_checks(const SimPath& path, const EnvDerived& envd,
                               const NetworkSpec& spec);

struct RateDiagnostic {
    double exponent = 0.0;
    double intercept = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Log-log growth rate of sup-distance against horizon; passes when the fitted
// exponent stays below 1/p' + 0.1 with p' = min(p, 3.9). Needs at least four
// horizons spanning two decades.
RateDiagnostic rate_diagnostic(const std::vector<std::pair<double, double>>& sup_by_horizon,
                               double moment_order);

void write_scaling_csv(const ScalingReport& report, std::ostream& out);
// One row per (scale, station, checkpoint) for external plotting.
void write_scaling_long_csv(const ScalingReport& report, std::ostream& out);
void write_scaling_summary(const ScalingReport& report, std::ostream& out);

}  // namespace jacksim
