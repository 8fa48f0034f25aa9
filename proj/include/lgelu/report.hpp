#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgelu/metrics.hpp"
#include "lgelu/train.hpp"

namespace lgelu {

inline constexpr const char* kLibraryVersion = "0.1.0";

// %.17g: enough digits to round-trip any double exactly.
std::string format_full(double v);

// Deterministic relative file name for run `index` of an output directory.
std::string run_file_name(std::size_t index, const RunRecord& run);

// Per-run CSV: epoch,phase,loss,val_metric[,lambda_1..lambda_L].
void write_run_csv(const RunRecord& run, const std::string& path);

// Manifest entry describing one stored run CSV.
struct ManifestRun {
    std::string file;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::Uniform;
    double t = 0.1;
    double c = 1.0;
    ActivationKind activation = ActivationKind::LambdaGelu;
    MetricDirection metric_direction = MetricDirection::HigherBetter;
    std::optional<int> switch_epoch;
    int best_epoch = 0;
    std::string best_phase;
    std::string role;  // "cell", "baseline" or "run"
};

struct Manifest {
    std::string command;
    std::string config_text;
    std::vector<ManifestRun> runs;
};

void write_manifest(const Manifest& manifest, const std::string& path);
Manifest read_manifest(const std::string& path);

// Rebuild a RunRecord from a stored CSV plus its manifest entry.
RunRecord read_run_csv(const std::string& path, const ManifestRun& meta);

// Grid CSV: t,c,drift,delta_bvs,status.
void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path);
std::vector<GridRow> read_grid_csv(const std::string& path);

struct CorrelationRow {
    double t = 0.0;
    double c = 0.0;
    int epoch = 0;
    std::string pair;  // "uniform_increasing", ..., or "mean"
    std::optional<double> rho;
};

// Epochwise Spearman correlations between init modes for every complete
// (t, c) cell in `cell_runs`; incomplete cells are skipped. Undefined
// correlations (all-equal profiles) are kept as explicit "undef" entries.
std::vector<CorrelationRow> correlation_rows(const std::vector<RunRecord>& cell_runs);

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path);

// Substitution CSV: arm,seed,best_epoch,best_phase,original,substituted with
// one trailing mean row per arm.
void write_substitution_csv(const SubstitutionStudy& study, const std::string& path);

}  // namespace lgelu
