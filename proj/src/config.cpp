#include "lgelu/config.hpp"

#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lgelu/errors.hpp"
#include "lgelu/gate_math.hpp"

namespace lgelu {

double AnnealSettings::resolved_lambda_target() const {
    if (lambda_target) {
        return *lambda_target;
    }
    return lambda_target_for(epsilon.value_or(5e-3));
}

void TrainConfig::validate() const {
    if (layer_sizes.size() < 2) {
        throw ConfigError("net.layer_sizes needs at least [input, output]");
    }
    for (int d : layer_sizes) {
        if (d < 1) {
            throw ConfigError("net.layer_sizes entries must be positive");
        }
    }
    if (seeds.empty()) {
        throw ConfigError("train.seeds must be non-empty");
    }
    if (epochs < 1) {
        throw ConfigError("train.epochs must be >= 1");
    }
    if (batch_size < 1) {
        throw ConfigError("train.batch_size must be >= 1");
    }
    if (!(t > 0.0)) {
        throw ConfigError("reparam.t must be > 0");
    }
    if (!(uniform_delta > 0.0)) {
        throw ConfigError("reparam.uniform_delta must be > 0");
    }
    if (!(dataset.val_fraction > 0.0 && dataset.val_fraction < 1.0)) {
        throw ConfigError("dataset.val_fraction must lie in (0, 1)");
    }
    if (dataset.kind != DatasetKind::IdxImages && dataset.size < 2) {
        throw ConfigError("dataset.size must be >= 2");
    }
    if (dataset.kind == DatasetKind::IdxImages &&
        (dataset.images_path.empty() || dataset.labels_path.empty())) {
        throw ConfigError("dataset.images and dataset.labels are required for idx datasets");
    }
    try {
        optimizer.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (anneal.enabled) {
        if (activation != ActivationKind::LambdaGelu) {
            throw ConfigError("anneal.enabled requires net.activation = lambda_gelu");
        }
        if (epochs < 2) {
            throw ConfigError("anneal.enabled requires train.epochs >= 2");
        }
        if (!(anneal.switch_fraction > 0.0 && anneal.switch_fraction < 1.0)) {
            throw ConfigError("anneal.switch_fraction must lie in (0, 1)");
        }
        if (anneal.epsilon && anneal.lambda_target) {
            throw ConfigError("anneal.epsilon and anneal.lambda_target are mutually exclusive");
        }
        if (anneal.epsilon && !(*anneal.epsilon > 0.0)) {
            throw ConfigError("anneal.epsilon must be > 0");
        }
        if (anneal.lambda_target && !(*anneal.lambda_target > 1.0)) {
            throw ConfigError("anneal.lambda_target must be > 1");
        }
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
};

std::map<std::string, KeyValue> tokenize(const std::string& text) {
    std::map<std::string, KeyValue> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        auto [it, inserted] = entries.emplace(key, KeyValue{value, line_no});
        if (!inserted) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                              "' (first set on line " + std::to_string(it->second.line) + ")");
        }
    }
    return entries;
}

class Parser {
public:
    explicit Parser(const std::string& text) : entries_(tokenize(text)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::optional<std::string> raw(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        consumed_.insert(key);
        return it->second.value;
    }

    void get_string(const std::string& key, std::string& out) {
        if (auto v = raw(key)) {
            out = *v;
        }
    }

    void get_double(const std::string& key, double& out) {
        if (auto v = raw(key)) {
            out = parse_double(key, *v);
        }
    }

    void get_optional_double(const std::string& key, std::optional<double>& out) {
        if (auto v = raw(key)) {
            out = parse_double(key, *v);
        }
    }

    void get_int(const std::string& key, int& out) {
        if (auto v = raw(key)) {
            out = parse_int(key, *v);
        }
    }

    void get_bool(const std::string& key, bool& out) {
        if (auto v = raw(key)) {
            if (*v == "true") {
                out = true;
            } else if (*v == "false") {
                out = false;
            } else {
                fail(key, "expected 'true' or 'false', got '" + *v + "'");
            }
        }
    }

    void get_int_list(const std::string& key, std::vector<int>& out) {
        if (auto v = raw(key)) {
            out.clear();
            for (const std::string& item : split_list(key, *v)) {
                out.push_back(parse_int(key, item));
            }
        }
    }

    void get_u64_list(const std::string& key, std::vector<std::uint64_t>& out) {
        if (auto v = raw(key)) {
            out.clear();
            for (const std::string& item : split_list(key, *v)) {
                try {
                    std::size_t pos = 0;
                    const std::uint64_t parsed = std::stoull(item, &pos);
                    if (pos != item.size()) {
                        throw std::invalid_argument(item);
                    }
                    out.push_back(parsed);
                } catch (const std::exception&) {
                    fail(key, "expected unsigned integer, got '" + item + "'");
                }
            }
        }
    }

    void get_double_list(const std::string& key, std::vector<double>& out) {
        if (auto v = raw(key)) {
            out.clear();
            for (const std::string& item : split_list(key, *v)) {
                out.push_back(parse_double(key, item));
            }
        }
    }

    template <typename Enum>
    void get_enum(const std::string& key, Enum& out,
                  const std::vector<std::pair<std::string, Enum>>& table) {
        if (auto v = raw(key)) {
            for (const auto& [name, value] : table) {
                if (*v == name) {
                    out = value;
                    return;
                }
            }
            std::string names;
            for (const auto& [name, value] : table) {
                names += (names.empty() ? "" : ", ") + name;
            }
            fail(key, "expected one of {" + names + "}, got '" + *v + "'");
        }
    }

    // Every key in the file must have been consumed by a getter.
    void reject_unknown() const {
        for (const auto& [key, kv] : entries_) {
            if (consumed_.count(key) == 0) {
                throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + key + "'");
            }
        }
    }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) {
        throw ConfigError("line " + std::to_string(entries_.at(key).line) + ": key '" + key + "': " + what);
    }

    double parse_double(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            const double parsed = std::stod(value, &pos);
            if (pos != value.size()) {
                throw std::invalid_argument(value);
            }
            return parsed;
        } catch (const std::exception&) {
            fail(key, "expected real number, got '" + value + "'");
        }
    }

    int parse_int(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            const long parsed = std::stol(value, &pos);
            if (pos != value.size() || parsed < INT_MIN || parsed > INT_MAX) {
                throw std::invalid_argument(value);
            }
            return static_cast<int>(parsed);
        } catch (const std::exception&) {
            fail(key, "expected integer, got '" + value + "'");
        }
    }

    std::vector<std::string> split_list(const std::string& key, const std::string& value) {
        std::vector<std::string> items;
        std::string current;
        std::istringstream in(value);
        while (std::getline(in, current, ',')) {
            current = trim(current);
            if (current.empty()) {
                fail(key, "empty list element");
            }
            items.push_back(current);
        }
        if (items.empty()) {
            fail(key, "empty list");
        }
        return items;
    }

    std::map<std::string, KeyValue> entries_;
    std::set<std::string> consumed_;
};

TrainConfig parse_impl(Parser& parser) {
    TrainConfig cfg;
    parser.get_enum<DatasetKind>("dataset.kind", cfg.dataset.kind,
                                 {{"moons", DatasetKind::SyntheticMoons},
                                  {"blobs", DatasetKind::SyntheticBlobs},
                                  {"idx", DatasetKind::IdxImages}});
    parser.get_int("dataset.size", cfg.dataset.size);
    parser.get_int("dataset.classes", cfg.dataset.classes);
    parser.get_double("dataset.noise", cfg.dataset.noise);
    parser.get_string("dataset.images", cfg.dataset.images_path);
    parser.get_string("dataset.labels", cfg.dataset.labels_path);
    parser.get_double("dataset.val_fraction", cfg.dataset.val_fraction);

    parser.get_int_list("net.layer_sizes", cfg.layer_sizes);
    parser.get_enum<ActivationKind>("net.activation", cfg.activation,
                                    {{"lambda_gelu", ActivationKind::LambdaGelu},
                                     {"gelu", ActivationKind::Gelu},
                                     {"relu", ActivationKind::Relu}});

    parser.get_double("reparam.t", cfg.t);
    parser.get_double("reparam.uniform_delta", cfg.uniform_delta);
    parser.get_enum<InitMode>("reparam.init_mode", cfg.init_mode,
                              {{"uniform", InitMode::Uniform},
                               {"increasing", InitMode::Increasing},
                               {"decreasing", InitMode::Decreasing}});

    parser.get_enum<OptimizerKind>("optim.kind", cfg.optimizer.kind,
                                   {{"sgd", OptimizerKind::Sgd}, {"adamw", OptimizerKind::AdamW}});
    parser.get_double("optim.lr", cfg.optimizer.lr_weights);
    parser.get_double("optim.c", cfg.optimizer.multiplier_c);
    parser.get_double("optim.weight_decay", cfg.optimizer.weight_decay);
    parser.get_double("optim.beta1", cfg.optimizer.adam_beta1);
    parser.get_double("optim.beta2", cfg.optimizer.adam_beta2);
    parser.get_double("optim.eps", cfg.optimizer.adam_eps);

    parser.get_int("train.epochs", cfg.epochs);
    parser.get_int("train.batch_size", cfg.batch_size);
    parser.get_u64_list("train.seeds", cfg.seeds);
    parser.get_enum<MetricDirection>("train.metric", cfg.metric_direction,
                                     {{"higher_better", MetricDirection::HigherBetter},
                                      {"lower_better", MetricDirection::LowerBetter}});

    parser.get_bool("anneal.enabled", cfg.anneal.enabled);
    parser.get_double("anneal.switch_fraction", cfg.anneal.switch_fraction);
    parser.get_optional_double("anneal.epsilon", cfg.anneal.epsilon);
    parser.get_optional_double("anneal.lambda_target", cfg.anneal.lambda_target);
    return cfg;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

TrainConfig parse_config_text(const std::string& text) {
    Parser parser(text);
    TrainConfig cfg = parse_impl(parser);
    // grid axes are legal in any config file; ignored outside grid runs
    std::vector<double> ignored;
    parser.get_double_list("grid.t_values", ignored);
    parser.get_double_list("grid.c_values", ignored);
    parser.reject_unknown();
    cfg.validate();
    return cfg;
}

TrainConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

GridSpec grid_from_config(const TrainConfig& cfg, const std::string& text) {
    Parser parser(text);
    GridSpec grid;
    grid.base = cfg;
    parser.get_double_list("grid.t_values", grid.t_values);
    parser.get_double_list("grid.c_values", grid.c_values);
    if (grid.t_values.empty() || grid.c_values.empty()) {
        throw ConfigError("grid runs need non-empty grid.t_values and grid.c_values");
    }
    for (double t : grid.t_values) {
        if (!(t > 0.0)) {
            throw ConfigError("grid.t_values entries must be > 0");
        }
    }
    for (double c : grid.c_values) {
        if (!(c >= 0.0)) {
            throw ConfigError("grid.c_values entries must be >= 0");
        }
    }
    return grid;
}

GridSpec load_grid_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    return grid_from_config(parse_config_text(text), text);
}

std::string config_to_text(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "dataset.kind = " << to_string(cfg.dataset.kind) << "\n";
    out << "dataset.size = " << cfg.dataset.size << "\n";
    out << "dataset.classes = " << cfg.dataset.classes << "\n";
    out << "dataset.noise = " << format_double(cfg.dataset.noise) << "\n";
    if (!cfg.dataset.images_path.empty()) {
        out << "dataset.images = " << cfg.dataset.images_path << "\n";
    }
    if (!cfg.dataset.labels_path.empty()) {
        out << "dataset.labels = " << cfg.dataset.labels_path << "\n";
    }
    out << "dataset.val_fraction = " << format_double(cfg.dataset.val_fraction) << "\n";
    out << "net.layer_sizes = ";
    for (std::size_t i = 0; i < cfg.layer_sizes.size(); ++i) {
        out << (i > 0 ? "," : "") << cfg.layer_sizes[i];
    }
    out << "\n";
    out << "net.activation = " << to_string(cfg.activation) << "\n";
    out << "reparam.t = " << format_double(cfg.t) << "\n";
    out << "reparam.uniform_delta = " << format_double(cfg.uniform_delta) << "\n";
    out << "reparam.init_mode = " << to_string(cfg.init_mode) << "\n";
    out << "optim.kind = " << to_string(cfg.optimizer.kind) << "\n";
    out << "optim.lr = " << format_double(cfg.optimizer.lr_weights) << "\n";
    out << "optim.c = " << format_double(cfg.optimizer.multiplier_c) << "\n";
    out << "optim.weight_decay = " << format_double(cfg.optimizer.weight_decay) << "\n";
    out << "optim.beta1 = " << format_double(cfg.optimizer.adam_beta1) << "\n";
    out << "optim.beta2 = " << format_double(cfg.optimizer.adam_beta2) << "\n";
    out << "optim.eps = " << format_double(cfg.optimizer.adam_eps) << "\n";
    out << "train.epochs = " << cfg.epochs << "\n";
    out << "train.batch_size = " << cfg.batch_size << "\n";
    out << "train.seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        out << (i > 0 ? "," : "") << cfg.seeds[i];
    }
    out << "\n";
    out << "train.metric = " << to_string(cfg.metric_direction) << "\n";
    out << "anneal.enabled = " << (cfg.anneal.enabled ? "true" : "false") << "\n";
    out << "anneal.switch_fraction = " << format_double(cfg.anneal.switch_fraction) << "\n";
    if (cfg.anneal.epsilon) {
        out << "anneal.epsilon = " << format_double(*cfg.anneal.epsilon) << "\n";
    }
    if (cfg.anneal.lambda_target) {
        out << "anneal.lambda_target = " << format_double(*cfg.anneal.lambda_target) << "\n";
    }
    return out.str();
}

std::string grid_to_text(const GridSpec& grid) {
    std::ostringstream out;
    out << config_to_text(grid.base);
    out << "grid.t_values = ";
    for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
        out << (i > 0 ? "," : "") << format_double(grid.t_values[i]);
    }
    out << "\n";
    out << "grid.c_values = ";
    for (std::size_t i = 0; i < grid.c_values.size(); ++i) {
        out << (i > 0 ? "," : "") << format_double(grid.c_values[i]);
    }
    out << "\n";
    return out.str();
}

}  // namespace lgelu
