#include "lgelu/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "lgelu/errors.hpp"
#include "lgelu/gate_math.hpp"

namespace lgelu {

double classification_accuracy(const NetworkState& net, const Dataset& data) {
    if (data.size() == 0) {
        throw std::invalid_argument("classification_accuracy: empty dataset");
    }
    int correct = 0;
    Vector input(static_cast<std::size_t>(data.feature_dim));
    for (int i = 0; i < data.size(); ++i) {
        const double* row = data.sample(i);
        input.assign(row, row + data.feature_dim);
        const Vector logits = forward(net, input);
        int arg = 0;
        for (std::size_t k = 1; k < logits.size(); ++k) {
            if (logits[k] > logits[static_cast<std::size_t>(arg)]) {
                arg = static_cast<int>(k);
            }
        }
        if (arg == data.labels[static_cast<std::size_t>(i)]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / data.size();
}

namespace {

// Run a list of independent jobs on up to `jobs` threads. Results land in
// caller-owned slots keyed by job index, so the merge order never depends on
// scheduling.
void run_jobs(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
    const int workers = std::max(1, jobs);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            work(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                work(i);
            }
        });
    }
    for (std::thread& th : pool) {
        th.join();
    }
}

}  // namespace

TrainOutcome run_training(const TrainConfig& cfg, std::uint64_t seed) {
    cfg.validate();

    const SplitDataset data = load_dataset(cfg.dataset, seed);
    if (data.train.feature_dim != cfg.layer_sizes.front()) {
        throw ConfigError("net.layer_sizes input width " + std::to_string(cfg.layer_sizes.front()) +
                          " does not match dataset feature dimension " +
                          std::to_string(data.train.feature_dim));
    }
    if (data.train.num_classes > cfg.layer_sizes.back()) {
        throw ConfigError("net.layer_sizes output width " + std::to_string(cfg.layer_sizes.back()) +
                          " is smaller than the number of classes " +
                          std::to_string(data.train.num_classes));
    }

    const int num_hidden = static_cast<int>(cfg.layer_sizes.size()) - 2;
    std::vector<HardnessParam> hardness;
    if (num_hidden > 0) {
        hardness = init_profile(cfg.init_mode, num_hidden, cfg.t, cfg.uniform_delta);
    }
    SplitMix64 init_rng = stream_rng(seed, Stream::Init);
    NetworkState net(cfg.layer_sizes, cfg.activation, hardness, init_rng);

    Optimizer optimizer(net, cfg.optimizer);

    AnnealPlan plan;
    const bool annealing = cfg.anneal.enabled;
    if (annealing) {
        plan = AnnealPlan::make(cfg.epochs, cfg.anneal.switch_fraction,
                                cfg.anneal.resolved_lambda_target());
    }
    const bool track_profiles = cfg.activation == ActivationKind::LambdaGelu && num_hidden > 0;

    TrainOutcome outcome;
    outcome.record.seed = seed;
    outcome.record.init_mode = cfg.init_mode;
    outcome.record.t = cfg.t;
    outcome.record.c = cfg.optimizer.multiplier_c;
    outcome.record.activation = cfg.activation;
    outcome.record.metric_direction = cfg.metric_direction;
    if (annealing) {
        outcome.record.switch_epoch = plan.switch_epoch;
    }
    outcome.best_phase = "none";

    SplitMix64 shuffle_rng = stream_rng(seed, Stream::Shuffle);
    std::vector<int> order(static_cast<std::size_t>(data.train.size()));
    std::iota(order.begin(), order.end(), 0);

    Vector input(static_cast<std::size_t>(data.train.feature_dim));
    ForwardCache cache;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (annealing) {
            apply_phase(plan, net, epoch);
        }
        const std::string phase =
            cfg.activation != ActivationKind::LambdaGelu ? "none"
            : (annealing && epoch > plan.switch_epoch)   ? "annealed"
                                                         : "learnable";

        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        int batches = 0;
        bool bad = false;
        std::string diagnostic;

        for (int start = 0; start < data.train.size() && !bad; start += cfg.batch_size) {
            const int end = std::min(start + cfg.batch_size, data.train.size());
            GradientSet grads = zero_gradients(net);
            double batch_loss = 0.0;
            for (int i = start; i < end; ++i) {
                const int idx = order[static_cast<std::size_t>(i)];
                const double* row = data.train.sample(idx);
                input.assign(row, row + data.train.feature_dim);
                const Vector logits = forward(net, input, &cache);
                const LossResult loss = loss_cross_entropy(logits, data.train.labels[static_cast<std::size_t>(idx)]);
                batch_loss += loss.loss;
                grads += backward(net, cache, loss.grad);
            }
            const double scale = 1.0 / (end - start);
            grads.scale(scale);
            batch_loss *= scale;
            if (!std::isfinite(batch_loss)) {
                bad = true;
                diagnostic = "non-finite training loss at epoch " + std::to_string(epoch);
                break;
            }
            try {
                optimizer.step(net, grads);
            } catch (const DivergenceError& e) {
                bad = true;
                diagnostic = std::string(e.what()) + " at epoch " + std::to_string(epoch);
                break;
            }
            epoch_loss += batch_loss;
            ++batches;
        }

        if (bad) {
            outcome.diverged = true;
            outcome.diagnostic = diagnostic;
            return outcome;
        }

        epoch_loss /= std::max(1, batches);
        const double val_metric = classification_accuracy(net, data.val);

        outcome.record.loss_curve.push_back(epoch_loss);
        outcome.record.val_curve.push_back(val_metric);
        if (track_profiles) {
            HardnessProfile profile;
            profile.epoch = epoch;
            profile.lambdas = net.hardness_profile();
            outcome.record.profiles.push_back(std::move(profile));
        }

        // Earliest-tie best checkpoint: replace only on strict improvement.
        bool improve = outcome.best_epoch == 0;
        if (!improve) {
            const double prev = outcome.record.val_curve[static_cast<std::size_t>(outcome.best_epoch) - 1];
            improve = cfg.metric_direction == MetricDirection::HigherBetter ? val_metric > prev
                                                                            : val_metric < prev;
        }
        if (improve) {
            outcome.best_net = net;
            outcome.best_epoch = epoch;
            outcome.best_phase = phase;
        }
    }
    return outcome;
}

std::vector<TrainOutcome> run_seeds(const TrainConfig& cfg, int jobs) {
    cfg.validate();
    std::vector<TrainOutcome> outcomes(cfg.seeds.size());
    run_jobs(cfg.seeds.size(), jobs,
             [&](std::size_t i) { outcomes[i] = run_training(cfg, cfg.seeds[i]); });
    return outcomes;
}

namespace {

const InitMode kAllModes[] = {InitMode::Uniform, InitMode::Increasing, InitMode::Decreasing};

TrainConfig gelu_baseline_of(const TrainConfig& cfg) {
    TrainConfig baseline = cfg;
    baseline.activation = ActivationKind::Gelu;
    baseline.anneal.enabled = false;
    return baseline;
}

double mean_over(const std::vector<SubstitutionRow>& rows, ActivationKind arm, bool substituted) {
    double sum = 0.0;
    int count = 0;
    for (const SubstitutionRow& row : rows) {
        if (row.arm == arm) {
            sum += substituted ? row.substituted : row.original;
            ++count;
        }
    }
    return count > 0 ? sum / count : 0.0;
}

}  // namespace

GridResult run_grid(const GridSpec& grid, int jobs) {
    grid.base.validate();
    if (grid.t_values.empty() || grid.c_values.empty()) {
        throw ConfigError("run_grid: empty grid axes");
    }
    if (grid.base.layer_sizes.size() < 3) {
        throw ConfigError("run_grid: hardness drift needs at least one hidden layer");
    }

    struct Job {
        TrainConfig cfg;
        std::uint64_t seed = 0;
        std::size_t cell = 0;  // index into rows; baseline jobs use npos
    };
    constexpr std::size_t kBaseline = static_cast<std::size_t>(-1);

    std::vector<Job> jobs_list;
    const std::size_t num_cells = grid.t_values.size() * grid.c_values.size();
    for (std::size_t ti = 0; ti < grid.t_values.size(); ++ti) {
        for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
            const std::size_t cell = ti * grid.c_values.size() + ci;
            for (InitMode mode : kAllModes) {
                for (std::uint64_t seed : grid.base.seeds) {
                    TrainConfig cfg = grid.base;
                    cfg.activation = ActivationKind::LambdaGelu;
                    cfg.anneal.enabled = false;
                    cfg.t = grid.t_values[ti];
                    cfg.optimizer.multiplier_c = grid.c_values[ci];
                    cfg.init_mode = mode;
                    jobs_list.push_back({std::move(cfg), seed, cell});
                }
            }
        }
    }
    for (std::uint64_t seed : grid.base.seeds) {
        jobs_list.push_back({gelu_baseline_of(grid.base), seed, kBaseline});
    }

    std::vector<TrainOutcome> outcomes(jobs_list.size());
    run_jobs(jobs_list.size(), jobs, [&](std::size_t i) {
        outcomes[i] = run_training(jobs_list[i].cfg, jobs_list[i].seed);
    });

    GridResult result;
    result.rows.resize(num_cells);
    std::vector<std::vector<RunRecord>> per_cell(num_cells);
    std::vector<std::string> cell_notes(num_cells);
    std::string baseline_note;
    for (std::size_t i = 0; i < jobs_list.size(); ++i) {
        const Job& job = jobs_list[i];
        TrainOutcome& outcome = outcomes[i];
        if (job.cell == kBaseline) {
            if (outcome.diverged) {
                if (baseline_note.empty()) {
                    baseline_note = "gelu baseline (seed " + std::to_string(job.seed) +
                                    ") diverged: " + outcome.diagnostic;
                }
                continue;
            }
            result.baseline_runs.push_back(std::move(outcome.record));
            continue;
        }
        if (outcome.diverged) {
            // Failed runs stay out of the aggregates; the cell row carries the note.
            if (cell_notes[job.cell].empty()) {
                cell_notes[job.cell] = "seed " + std::to_string(job.seed) + " (" +
                                       to_string(job.cfg.init_mode) + "): " + outcome.diagnostic;
            }
            continue;
        }
        per_cell[job.cell].push_back(outcome.record);
        result.cell_runs.push_back(std::move(outcome.record));
    }

    const std::size_t runs_per_cell = 3 * grid.base.seeds.size();
    for (std::size_t ti = 0; ti < grid.t_values.size(); ++ti) {
        for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
            const std::size_t cell = ti * grid.c_values.size() + ci;
            GridRow& row = result.rows[cell];
            row.t = grid.t_values[ti];
            row.c = grid.c_values[ci];
            if (per_cell[cell].size() != runs_per_cell) {
                row.failed = true;
                row.note = cell_notes[cell].empty() ? "incomplete cell" : cell_notes[cell];
                continue;
            }
            if (result.baseline_runs.size() != grid.base.seeds.size()) {
                row.failed = true;
                row.note = baseline_note.empty() ? "gelu baseline incomplete" : baseline_note;
                continue;
            }
            row.drift = cell_average_drift(per_cell[cell]);
            row.delta_bvs = delta_bvs(per_cell[cell], result.baseline_runs);
        }
    }
    return result;
}

SubstitutionStudy run_anneal_study(const TrainConfig& cfg, int jobs) {
    cfg.validate();
    SubstitutionStudy study;
    std::vector<TrainOutcome> outcomes = run_seeds(cfg, jobs);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        TrainOutcome& outcome = outcomes[i];
        if (outcome.diverged) {
            throw DivergenceError("run (seed " + std::to_string(cfg.seeds[i]) +
                                  ") diverged: " + outcome.diagnostic);
        }
        const SplitDataset data = load_dataset(cfg.dataset, cfg.seeds[i]);
        const SubstitutionResult sub = evaluate_substitution(
            outcome.best_net,
            [&](const NetworkState& net) { return classification_accuracy(net, data.val); });
        SubstitutionRow row;
        row.arm = cfg.activation;
        row.seed = cfg.seeds[i];
        row.best_epoch = outcome.best_epoch;
        row.best_phase = outcome.best_phase;
        row.original = sub.original_metric;
        row.substituted = sub.substituted_metric;
        study.rows.push_back(row);
        study.records.push_back(std::move(outcome.record));
    }
    study.lgelu_original_mean = mean_over(study.rows, ActivationKind::LambdaGelu, false);
    study.lgelu_substituted_mean = mean_over(study.rows, ActivationKind::LambdaGelu, true);
    study.gelu_original_mean = mean_over(study.rows, ActivationKind::Gelu, false);
    study.gelu_substituted_mean = mean_over(study.rows, ActivationKind::Gelu, true);
    return study;
}

SubstitutionStudy run_substitution_study(const TrainConfig& cfg, int jobs) {
    cfg.validate();
    if (!cfg.anneal.enabled || cfg.activation != ActivationKind::LambdaGelu) {
        throw ConfigError("run_substitution_study: config must be an anneal-enabled lambda_gelu run");
    }
    const SubstitutionStudy annealed = run_anneal_study(cfg, jobs);
    const SubstitutionStudy baseline = run_anneal_study(gelu_baseline_of(cfg), jobs);

    SubstitutionStudy study;
    study.rows = baseline.rows;
    study.rows.insert(study.rows.end(), annealed.rows.begin(), annealed.rows.end());
    study.records = baseline.records;
    study.records.insert(study.records.end(), annealed.records.begin(), annealed.records.end());
    study.gelu_original_mean = baseline.gelu_original_mean;
    study.gelu_substituted_mean = baseline.gelu_substituted_mean;
    study.lgelu_original_mean = annealed.lgelu_original_mean;
    study.lgelu_substituted_mean = annealed.lgelu_substituted_mean;
    return study;
}

}  // namespace lgelu
