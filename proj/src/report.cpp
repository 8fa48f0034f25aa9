#include "lgelu/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lgelu/errors.hpp"

namespace lgelu {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string format_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

double parse_double_field(const std::string& field, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) {
            throw std::invalid_argument(field);
        }
        return v;
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + field + "' in " + path);
    }
}

std::string sanitize_note(std::string note) {
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    return note;
}

ActivationKind activation_from_name(const std::string& name, const std::string& context) {
    if (name == "lambda_gelu") return ActivationKind::LambdaGelu;
    if (name == "gelu") return ActivationKind::Gelu;
    if (name == "relu") return ActivationKind::Relu;
    throw IoError("unknown activation '" + name + "' in " + context);
}

InitMode mode_from_name(const std::string& name, const std::string& context) {
    if (name == "uniform") return InitMode::Uniform;
    if (name == "increasing") return InitMode::Increasing;
    if (name == "decreasing") return InitMode::Decreasing;
    throw IoError("unknown init mode '" + name + "' in " + context);
}

MetricDirection direction_from_name(const std::string& name, const std::string& context) {
    if (name == "higher_better") return MetricDirection::HigherBetter;
    if (name == "lower_better") return MetricDirection::LowerBetter;
    throw IoError("unknown metric direction '" + name + "' in " + context);
}

}  // namespace

std::string run_file_name(std::size_t index, const RunRecord& run) {
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "r%03zu", index);
    std::ostringstream name;
    name << "runs/" << prefix << "_t" << format_short(run.t) << "_c" << format_short(run.c) << "_"
         << to_string(run.init_mode) << "_s" << run.seed << "_" << to_string(run.activation) << ".csv";
    return name.str();
}

void write_run_csv(const RunRecord& run, const std::string& path) {
    std::ofstream out = open_out(path);
    const std::size_t num_lambdas = run.profiles.empty() ? 0 : run.profiles.front().lambdas.size();
    out << "epoch,phase,loss,val_metric";
    for (std::size_t l = 1; l <= num_lambdas; ++l) {
        out << ",lambda_" << l;
    }
    out << "\n";
    for (std::size_t e = 0; e < run.val_curve.size(); ++e) {
        const int epoch = static_cast<int>(e) + 1;
        const std::string phase = run.activation != ActivationKind::LambdaGelu ? "none"
                                  : (run.switch_epoch && epoch > *run.switch_epoch) ? "annealed"
                                                                                    : "learnable";
        out << epoch << "," << phase << "," << format_full(run.loss_curve[e]) << ","
            << format_full(run.val_curve[e]);
        if (num_lambdas > 0) {
            const HardnessProfile& profile = run.profiles[e];
            for (double lambda : profile.lambdas) {
                out << "," << format_full(lambda);
            }
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("failed writing run CSV: " + path);
    }
}

RunRecord read_run_csv(const std::string& path, const ManifestRun& meta) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open run CSV: " + path);
    }
    RunRecord run;
    run.seed = meta.seed;
    run.init_mode = meta.init_mode;
    run.t = meta.t;
    run.c = meta.c;
    run.activation = meta.activation;
    run.metric_direction = meta.metric_direction;
    run.switch_epoch = meta.switch_epoch;

    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty run CSV: " + path);
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "epoch" || header[1] != "phase" || header[2] != "loss" ||
        header[3] != "val_metric") {
        throw IoError("unexpected run CSV header in " + path);
    }
    const std::size_t num_lambdas = header.size() - 4;

    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError("ragged run CSV row in " + path);
        }
        run.loss_curve.push_back(parse_double_field(fields[2], path));
        run.val_curve.push_back(parse_double_field(fields[3], path));
        if (num_lambdas > 0) {
            HardnessProfile profile;
            profile.epoch = static_cast<int>(run.val_curve.size());
            for (std::size_t l = 0; l < num_lambdas; ++l) {
                profile.lambdas.push_back(parse_double_field(fields[4 + l], path));
            }
            run.profiles.push_back(std::move(profile));
        }
    }
    return run;
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    json doc;
    doc["library_version"] = kLibraryVersion;
    doc["manifest_version"] = 1;
    doc["command"] = manifest.command;
    doc["config_text"] = manifest.config_text;
    json runs = json::array();
    for (const ManifestRun& run : manifest.runs) {
        json entry;
        entry["file"] = run.file;
        entry["seed"] = run.seed;
        entry["init_mode"] = to_string(run.init_mode);
        entry["t"] = run.t;
        entry["c"] = run.c;
        entry["activation"] = to_string(run.activation);
        entry["metric"] = to_string(run.metric_direction);
        if (run.switch_epoch) {
            entry["switch_epoch"] = *run.switch_epoch;
        }
        entry["best_epoch"] = run.best_epoch;
        entry["best_phase"] = run.best_phase;
        entry["role"] = run.role;
        runs.push_back(entry);
    }
    doc["runs"] = runs;
    std::ofstream out = open_out(path);
    out << doc.dump(2) << "\n";
    if (!out) {
        throw IoError("failed writing manifest: " + path);
    }
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest: " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("bad manifest JSON in " + path + ": " + e.what());
    }
    Manifest manifest;
    try {
        manifest.command = doc.at("command").get<std::string>();
        manifest.config_text = doc.at("config_text").get<std::string>();
        for (const json& entry : doc.at("runs")) {
            ManifestRun run;
            run.file = entry.at("file").get<std::string>();
            run.seed = entry.at("seed").get<std::uint64_t>();
            run.init_mode = mode_from_name(entry.at("init_mode").get<std::string>(), path);
            run.t = entry.at("t").get<double>();
            run.c = entry.at("c").get<double>();
            run.activation = activation_from_name(entry.at("activation").get<std::string>(), path);
            run.metric_direction = direction_from_name(entry.at("metric").get<std::string>(), path);
            if (entry.contains("switch_epoch")) {
                run.switch_epoch = entry.at("switch_epoch").get<int>();
            }
            run.best_epoch = entry.at("best_epoch").get<int>();
            run.best_phase = entry.at("best_phase").get<std::string>();
            run.role = entry.at("role").get<std::string>();
            manifest.runs.push_back(std::move(run));
        }
    } catch (const json::exception& e) {
        throw IoError("bad manifest structure in " + path + ": " + e.what());
    }
    return manifest;
}

void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t,c,drift,delta_bvs,status\n";
    for (const GridRow& row : rows) {
        out << format_full(row.t) << "," << format_full(row.c) << ",";
        if (row.failed) {
            out << ",,failed: " << sanitize_note(row.note);
        } else {
            out << format_full(row.drift) << "," << format_full(row.delta_bvs) << ",ok";
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("failed writing grid CSV: " + path);
    }
}

std::vector<GridRow> read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open grid CSV: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "t,c,drift,delta_bvs,status") {
        throw IoError("unexpected grid CSV header in " + path);
    }
    std::vector<GridRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw IoError("ragged grid CSV row in " + path);
        }
        GridRow row;
        row.t = parse_double_field(fields[0], path);
        row.c = parse_double_field(fields[1], path);
        if (fields[4] == "ok") {
            row.drift = parse_double_field(fields[2], path);
            row.delta_bvs = parse_double_field(fields[3], path);
        } else {
            row.failed = true;
            row.note = fields[4];
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<CorrelationRow> correlation_rows(const std::vector<RunRecord>& cell_runs) {
    std::map<std::pair<double, double>, std::vector<const RunRecord*>> cells;
    for (const RunRecord& run : cell_runs) {
        cells[{run.t, run.c}].push_back(&run);
    }
    std::vector<CorrelationRow> rows;
    for (const auto& [key, runs] : cells) {
        // Correlations need a complete cell: three modes over one seed set with
        // equal-length profile histories.
        std::map<InitMode, std::size_t> mode_counts;
        std::size_t epochs = 0;
        bool complete = true;
        for (const RunRecord* run : runs) {
            ++mode_counts[run->init_mode];
            if (run->profiles.empty()) {
                complete = false;
                break;
            }
            if (epochs == 0) {
                epochs = run->profiles.size();
            } else if (run->profiles.size() != epochs) {
                complete = false;
                break;
            }
        }
        if (!complete || mode_counts.size() != 3) {
            continue;
        }
        const std::size_t per_mode = mode_counts.begin()->second;
        for (const auto& [mode, count] : mode_counts) {
            if (count != per_mode) {
                complete = false;
            }
        }
        if (!complete) {
            continue;
        }
        std::vector<RunRecord> local;
        local.reserve(runs.size());
        for (const RunRecord* run : runs) {
            local.push_back(*run);
        }
        for (std::size_t e = 1; e <= epochs; ++e) {
            std::vector<ModePairRho> pairs;
            try {
                pairs = rho_s_across_modes(local, static_cast<int>(e));
            } catch (const std::invalid_argument&) {
                break;  // mismatched seed sets: treat the cell as incomplete
            }
            bool any_undefined = false;
            double sum = 0.0;
            for (const ModePairRho& pair : pairs) {
                CorrelationRow row;
                row.t = key.first;
                row.c = key.second;
                row.epoch = static_cast<int>(e);
                row.pair = std::string(to_string(pair.first)) + "_" + to_string(pair.second);
                row.rho = pair.rho;
                rows.push_back(row);
                if (pair.rho) {
                    sum += *pair.rho;
                } else {
                    any_undefined = true;
                }
            }
            CorrelationRow mean_row;
            mean_row.t = key.first;
            mean_row.c = key.second;
            mean_row.epoch = static_cast<int>(e);
            mean_row.pair = "mean";
            if (!any_undefined && !pairs.empty()) {
                mean_row.rho = sum / static_cast<double>(pairs.size());
            }
            rows.push_back(mean_row);
        }
    }
    return rows;
}

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t,c,epoch,pair,rho\n";
    for (const CorrelationRow& row : rows) {
        out << format_full(row.t) << "," << format_full(row.c) << "," << row.epoch << "," << row.pair
            << "," << (row.rho ? format_full(*row.rho) : "undef") << "\n";
    }
    if (!out) {
        throw IoError("failed writing correlation CSV: " + path);
    }
}

void write_substitution_csv(const SubstitutionStudy& study, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "arm,seed,best_epoch,best_phase,original,substituted\n";
    for (const SubstitutionRow& row : study.rows) {
        out << to_string(row.arm) << "," << row.seed << "," << row.best_epoch << "," << row.best_phase
            << "," << format_full(row.original) << "," << format_full(row.substituted) << "\n";
    }
    bool has_gelu = false;
    bool has_lgelu = false;
    for (const SubstitutionRow& row : study.rows) {
        has_gelu = has_gelu || row.arm == ActivationKind::Gelu;
        has_lgelu = has_lgelu || row.arm == ActivationKind::LambdaGelu;
    }
    if (has_gelu) {
        out << "gelu,mean,,," << format_full(study.gelu_original_mean) << ","
            << format_full(study.gelu_substituted_mean) << "\n";
    }
    if (has_lgelu) {
        out << "lambda_gelu,mean,,," << format_full(study.lgelu_original_mean) << ","
            << format_full(study.lgelu_substituted_mean) << "\n";
    }
    if (!out) {
        throw IoError("failed writing substitution CSV: " + path);
    }
}

}  // namespace lgelu
