#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgelu/checkpoint.hpp"
#include "lgelu/config.hpp"
#include "lgelu/errors.hpp"
#include "lgelu/report.hpp"
#include "lgelu/train.hpp"

namespace {

using namespace lgelu;

namespace fs = std::filesystem;

std::string derive_phase(const RunRecord& run, int best_epoch) {
    if (run.activation != ActivationKind::LambdaGelu) {
        return "none";
    }
    if (run.switch_epoch && best_epoch > *run.switch_epoch) {
        return "annealed";
    }
    return "learnable";
}

ManifestRun manifest_entry(const RunRecord& run, const std::string& file, const std::string& role) {
    ManifestRun entry;
    entry.file = file;
    entry.seed = run.seed;
    entry.init_mode = run.init_mode;
    entry.t = run.t;
    entry.c = run.c;
    entry.activation = run.activation;
    entry.metric_direction = run.metric_direction;
    entry.switch_epoch = run.switch_epoch;
    if (!run.val_curve.empty()) {
        entry.best_epoch = best_validation(run).epoch;
        entry.best_phase = derive_phase(run, entry.best_epoch);
    }
    entry.role = role;
    return entry;
}

// Writes every record as runs/rNNN_*.csv under out_dir and appends the
// manifest entries.
void emit_runs(const std::string& out_dir, Manifest& manifest, const std::vector<RunRecord>& records,
               const std::string& role) {
    for (const RunRecord& record : records) {
        const std::string file = run_file_name(manifest.runs.size(), record);
        write_run_csv(record, (fs::path(out_dir) / file).string());
        manifest.runs.push_back(manifest_entry(record, file, role));
    }
}

void print_run_summaries(const std::vector<RunRecord>& records) {
    for (const RunRecord& record : records) {
        const BestValidation best = best_validation(record);
        std::cout << "  seed " << record.seed << " (" << to_string(record.init_mode) << ", "
                  << to_string(record.activation) << "): best val " << best.bvs << " at epoch "
                  << best.epoch;
        if (record.profiles.size() >= 2) {
            std::cout << ", drift " << drift_v_lambda(record);
        }
        std::cout << "\n";
    }
}

int cmd_train(const std::string& config_path, const std::vector<std::uint64_t>& seed_override,
              const std::string& out_dir, int jobs) {
    TrainConfig cfg = load_config(config_path);
    if (!seed_override.empty()) {
        cfg.seeds = seed_override;
    }
    cfg.validate();

    std::vector<TrainOutcome> outcomes = run_seeds(cfg, jobs);
    std::vector<RunRecord> records;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        if (outcomes[i].diverged) {
            std::cerr << "run diverged (seed " << cfg.seeds[i] << "): " << outcomes[i].diagnostic
                      << "\n";
            return 2;
        }
        records.push_back(outcomes[i].record);
    }

    Manifest manifest;
    manifest.command = "train";
    manifest.config_text = config_to_text(cfg);
    emit_runs(out_dir, manifest, records, "run");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::string file = "checkpoints/best_s" + std::to_string(cfg.seeds[i]) + ".ckpt";
        save_checkpoint(outcomes[i].best_net, (fs::path(out_dir) / file).string());
    }
    write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());

    std::cout << "train: " << records.size() << " run(s) -> " << out_dir << "\n";
    print_run_summaries(records);
    return 0;
}

int cmd_grid(const std::string& config_path, const std::vector<std::uint64_t>& seed_override,
             const std::string& out_dir, int jobs) {
    GridSpec grid = load_grid_config(config_path);
    if (!seed_override.empty()) {
        grid.base.seeds = seed_override;
    }

    const GridResult result = run_grid(grid, jobs);

    Manifest manifest;
    manifest.command = "grid";
    manifest.config_text = grid_to_text(grid);
    emit_runs(out_dir, manifest, result.cell_runs, "cell");
    emit_runs(out_dir, manifest, result.baseline_runs, "baseline");
    write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    write_grid_csv(result.rows, (fs::path(out_dir) / "grid.csv").string());
    write_correlation_csv(correlation_rows(result.cell_runs),
                          (fs::path(out_dir) / "correlations.csv").string());

    std::cout << "grid: " << result.rows.size() << " cell(s), " << result.cell_runs.size()
              << " run(s) -> " << out_dir << "\n";
    std::cout << "t,c,drift,delta_bvs,status\n";
    for (const GridRow& row : result.rows) {
        if (row.failed) {
            std::cout << row.t << "," << row.c << ",,,failed\n";
        } else {
            std::cout << row.t << "," << row.c << "," << row.drift << "," << row.delta_bvs << ",ok\n";
        }
    }
    return 0;
}

int run_study(const std::string& command, const std::string& config_path,
              const std::vector<std::uint64_t>& seed_override, const std::string& out_dir, int jobs) {
    TrainConfig cfg = load_config(config_path);
    if (!seed_override.empty()) {
        cfg.seeds = seed_override;
    }
    if (!cfg.anneal.enabled) {
        throw ConfigError(command + " requires anneal.enabled = true");
    }

    const SubstitutionStudy study = command == "anneal" ? run_anneal_study(cfg, jobs)
                                                        : run_substitution_study(cfg, jobs);

    Manifest manifest;
    manifest.command = command;
    manifest.config_text = config_to_text(cfg);
    emit_runs(out_dir, manifest, study.records, "run");
    write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    write_substitution_csv(study, (fs::path(out_dir) / "substitution.csv").string());

    std::cout << command << ": " << study.rows.size() << " evaluation(s) -> " << out_dir << "\n";
    for (const SubstitutionRow& row : study.rows) {
        std::cout << "  " << to_string(row.arm) << " seed " << row.seed << ": original "
                  << row.original << ", substituted " << row.substituted << " (best epoch "
                  << row.best_epoch << ", " << row.best_phase << ")\n";
    }
    if (command == "substitute") {
        std::cout << "  gelu mean: " << study.gelu_original_mean << " -> "
                  << study.gelu_substituted_mean << "\n";
    }
    std::cout << "  lambda_gelu mean: " << study.lgelu_original_mean << " -> "
              << study.lgelu_substituted_mean << "\n";
    return 0;
}

int cmd_report(const std::string& records_dir, const std::string& out_dir) {
    const Manifest manifest = read_manifest((fs::path(records_dir) / "manifest.json").string());
    std::vector<RunRecord> cell_runs;
    std::vector<RunRecord> baseline_runs;
    std::vector<RunRecord> all_runs;
    for (const ManifestRun& entry : manifest.runs) {
        RunRecord run = read_run_csv((fs::path(records_dir) / entry.file).string(), entry);
        if (entry.role == "cell") {
            cell_runs.push_back(run);
        } else if (entry.role == "baseline") {
            baseline_runs.push_back(run);
        }
        all_runs.push_back(std::move(run));
    }

    // Re-derived per-run metrics.
    {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        std::ofstream out((fs::path(out_dir) / "runs_summary.csv").string());
        if (!out) {
            throw IoError("cannot open for writing: " +
                          (fs::path(out_dir) / "runs_summary.csv").string());
        }
        out << "file,seed,init_mode,t,c,activation,bvs,bvs_epoch,drift\n";
        for (std::size_t i = 0; i < all_runs.size(); ++i) {
            const RunRecord& run = all_runs[i];
            const BestValidation best = best_validation(run);
            out << manifest.runs[i].file << "," << run.seed << "," << to_string(run.init_mode) << ","
                << format_full(run.t) << "," << format_full(run.c) << ","
                << to_string(run.activation) << "," << format_full(best.bvs) << "," << best.epoch
                << ",";
            if (run.profiles.size() >= 2) {
                out << format_full(drift_v_lambda(run));
            }
            out << "\n";
        }
    }

    if (!cell_runs.empty()) {
        // Rebuild the grid table; axis order comes from the embedded config.
        std::vector<GridRow> rows;
        GridSpec grid;
        try {
            grid = grid_from_config(parse_config_text(manifest.config_text), manifest.config_text);
        } catch (const ConfigError&) {
            grid.t_values.clear();
        }
        std::map<std::pair<double, double>, std::vector<RunRecord>> cells;
        for (const RunRecord& run : cell_runs) {
            cells[{run.t, run.c}].push_back(run);
        }
        auto make_row = [&](double t, double c, const std::vector<RunRecord>& runs) {
            GridRow row;
            row.t = t;
            row.c = c;
            if (runs.empty() || baseline_runs.empty()) {
                row.failed = true;
                row.note = "incomplete cell";
            } else {
                row.drift = cell_average_drift(runs);
                row.delta_bvs = delta_bvs(runs, baseline_runs);
            }
            return row;
        };
        if (!grid.t_values.empty()) {
            for (double t : grid.t_values) {
                for (double c : grid.c_values) {
                    rows.push_back(make_row(t, c, cells[{t, c}]));
                }
            }
        } else {
            for (const auto& [key, runs] : cells) {
                rows.push_back(make_row(key.first, key.second, runs));
            }
        }
        write_grid_csv(rows, (fs::path(out_dir) / "grid.csv").string());
        write_correlation_csv(correlation_rows(cell_runs),
                              (fs::path(out_dir) / "correlations.csv").string());
    }

    std::cout << "report: " << all_runs.size() << " stored run(s) -> " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardness-parameterized GELU training and ReLU-substitution harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string records_dir;
    std::vector<std::uint64_t> seeds;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) {
            sub->add_option("--config", config_path, "run configuration file")->required();
            sub->add_option("--seed", seeds, "override train.seeds")->delimiter(',');
            sub->add_option("--jobs", jobs, "parallel run fan-out")->check(CLI::PositiveNumber);
        }
        sub->add_option("--out", out_dir, "output directory");
    };

    CLI::App* train = app.add_subcommand("train", "single-configuration training runs");
    add_common(train, true);
    CLI::App* grid = app.add_subcommand("grid", "(t, c) sweep with drift and delta-BVS table");
    add_common(grid, true);
    CLI::App* anneal = app.add_subcommand("anneal", "deterministic hardening run + ReLU substitution");
    add_common(anneal, true);
    CLI::App* substitute =
        app.add_subcommand("substitute", "gelu-baseline vs annealed substitution comparison");
    add_common(substitute, true);
    CLI::App* report = app.add_subcommand("report", "re-derive metrics from stored records");
    report->add_option("--records", records_dir, "directory with manifest.json and runs/")->required();
    add_common(report, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (train->parsed()) {
            return cmd_train(config_path, seeds, out_dir, jobs);
        }
        if (grid->parsed()) {
            return cmd_grid(config_path, seeds, out_dir, jobs);
        }
        if (anneal->parsed()) {
            return run_study("anneal", config_path, seeds, out_dir, jobs);
        }
        if (substitute->parsed()) {
            return run_study("substitute", config_path, seeds, out_dir, jobs);
        }
        if (report->parsed()) {
            return cmd_report(records_dir, out_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DivergenceError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
