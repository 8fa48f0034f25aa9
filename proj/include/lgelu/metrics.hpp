#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lgelu/activation.hpp"
#include "lgelu/reparam.hpp"

namespace lgelu {

// Layerwise gate-hardness snapshot at one epoch (1-based).
struct HardnessProfile {
    std::vector<double> lambdas;
    int epoch = 0;
};

enum class MetricDirection { HigherBetter, LowerBetter };

const char* to_string(MetricDirection direction);

// Everything one training run leaves behind. For relu/gelu runs the profile
// list is empty (there is no learned hardness to track).
struct RunRecord {
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::Uniform;
    double t = 0.1;
    double c = 1.0;
    ActivationKind activation = ActivationKind::LambdaGelu;
    std::vector<HardnessProfile> profiles;  // one per epoch, or empty
    std::vector<double> val_curve;          // one per epoch
    std::vector<double> loss_curve;         // one per epoch (mean train loss)
    MetricDirection metric_direction = MetricDirection::HigherBetter;
    std::optional<int> switch_epoch;        // set when the run was annealed
};

// V_lambda: average over layers of the summed absolute epoch-to-epoch lambda
// changes, (1/L) * sum_l sum_e |lambda_l(e+1) - lambda_l(e)|. Zero iff every
// layer's lambda is constant across epochs. Requires at least 2 epochs.
double drift_v_lambda(const RunRecord& run);

// Mean V_lambda over the runs of one (t, c) grid cell (seeds x init modes).
// All runs must share the same (t, c).
double cell_average_drift(const std::vector<RunRecord>& runs);

struct BestValidation {
    double bvs = 0.0;
    int epoch = 0;  // 1-based; earliest epoch on ties
};

// Extremum of the validation curve under the run's metric direction.
BestValidation best_validation(const RunRecord& run);

// Mean best validation score of `cell_runs` minus that of `baseline_runs`.
double delta_bvs(const std::vector<RunRecord>& cell_runs, const std::vector<RunRecord>& baseline_runs);

// Spearman rank correlation with average ranks for ties, computed as the
// Pearson correlation of the rank vectors (exact in the presence of ties).
// Returns nullopt when either rank vector has zero variance (an all-equal
// profile, which every fully annealed run eventually produces).
std::optional<double> spearman_rho(const HardnessProfile& a, const HardnessProfile& b);

struct ModePairRho {
    InitMode first = InitMode::Uniform;
    InitMode second = InitMode::Uniform;
    std::optional<double> rho;  // nullopt if any per-seed correlation was undefined
};

// For each unordered pair of initialization modes, the mean over seeds of the
// Spearman correlation between same-seed hardness profiles at `epoch`.
// Requires every mode to cover exactly the same seed set.
std::vector<ModePairRho> rho_s_across_modes(const std::vector<RunRecord>& runs, int epoch);

}  // namespace lgelu
