#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgelu/config.hpp"
#include "lgelu/metrics.hpp"
#include "lgelu/network.hpp"
#include "lgelu/schedule.hpp"

namespace lgelu {

// Fraction of validation samples whose argmax logit equals the label.
double classification_accuracy(const NetworkState& net, const Dataset& data);

struct TrainOutcome {
    RunRecord record;
    NetworkState best_net;    // snapshot at the best-validation epoch
    int best_epoch = 0;       // 1-based; 0 when the run produced no epochs
    std::string best_phase;   // "learnable", "annealed" or "none"
    bool diverged = false;
    std::string diagnostic;
};

// One seeded training run: T epochs of shuffled minibatch SGD/AdamW over the
// config's dataset, with per-epoch hardness profiles and validation metrics
// logged and the best checkpoint retained. When annealing is configured the
// phase schedule is applied at every epoch start. A non-finite loss or
// gradient aborts the run, returning the partial record with `diverged` set.
TrainOutcome run_training(const TrainConfig& cfg, std::uint64_t seed);

// cfg.seeds as independent jobs on up to `jobs` threads; result order matches
// the seed list regardless of scheduling.
std::vector<TrainOutcome> run_seeds(const TrainConfig& cfg, int jobs = 1);

struct GridRow {
    double t = 0.0;
    double c = 0.0;
    double drift = 0.0;      // cell-average V_lambda
    double delta_bvs = 0.0;  // mean cell BVS minus mean baseline BVS
    bool failed = false;
    std::string note;
};

struct GridResult {
    std::vector<GridRow> rows;               // |t_values| x |c_values| rows, t-major
    std::vector<RunRecord> cell_runs;        // every lambda-gelu run of the sweep
    std::vector<RunRecord> baseline_runs;    // gelu runs, one per seed
};

// The (t, c) sweep: every cell runs seeds x {uniform, increasing, decreasing},
// plus one shared gelu baseline per seed. Per-cell failures (divergence) are
// recorded in the row and do not abort the sweep.
GridResult run_grid(const GridSpec& grid, int jobs = 1);

struct SubstitutionRow {
    ActivationKind arm = ActivationKind::Gelu;
    std::uint64_t seed = 0;
    int best_epoch = 0;
    std::string best_phase;
    double original = 0.0;
    double substituted = 0.0;
};

struct SubstitutionStudy {
    std::vector<SubstitutionRow> rows;
    double gelu_original_mean = 0.0;
    double gelu_substituted_mean = 0.0;
    double lgelu_original_mean = 0.0;
    double lgelu_substituted_mean = 0.0;
    std::vector<RunRecord> records;  // all underlying runs
};

// Two-arm comparison: a gelu baseline (direct ReLU swap at its best
// checkpoint) against the annealed lambda-gelu run (ReLU substitution after
// hardening), per seed and averaged. `cfg` must be an anneal-enabled
// lambda-gelu configuration; the baseline arm is derived from it.
SubstitutionStudy run_substitution_study(const TrainConfig& cfg, int jobs = 1);

// Per-seed substitution evaluation of a single configuration (no baseline arm).
SubstitutionStudy run_anneal_study(const TrainConfig& cfg, int jobs = 1);

}  // namespace lgelu
