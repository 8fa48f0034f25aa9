#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgelu/dataset.hpp"
#include "lgelu/metrics.hpp"
#include "lgelu/optim.hpp"

namespace lgelu {

struct AnnealSettings {
    bool enabled = false;
    double switch_fraction = 0.25;
    std::optional<double> epsilon;        // gate-error tolerance picking lambda_target
    std::optional<double> lambda_target;  // explicit target; mutually exclusive with epsilon

    // Explicit target if given, else lambda_target_for(epsilon), defaulting to
    // epsilon = 5e-3.
    double resolved_lambda_target() const;
};

struct TrainConfig {
    DatasetSpec dataset;
    std::vector<int> layer_sizes = {2, 16, 16, 16, 2};
    ActivationKind activation = ActivationKind::LambdaGelu;
    double t = 0.1;                 // softplus temperature
    double uniform_delta = 1e-4;    // lambda0 - 1 for uniform initialization
    InitMode init_mode = InitMode::Uniform;
    OptimizerConfig optimizer;
    int epochs = 40;
    int batch_size = 32;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    AnnealSettings anneal;
    MetricDirection metric_direction = MetricDirection::HigherBetter;

    void validate() const;  // throws ConfigError
};

struct GridSpec {
    std::vector<double> t_values;
    std::vector<double> c_values;
    TrainConfig base;
};

// Flat `section.key = value` text format; '#' starts a comment. Unknown and
// duplicate keys are rejected with the offending line number. The full key
// list is documented in the README.
TrainConfig parse_config_text(const std::string& text);
TrainConfig load_config(const std::string& path);

// Grid axes from the same file (grid.t_values / grid.c_values); both must be
// present for a grid run.
GridSpec grid_from_config(const TrainConfig& cfg, const std::string& text);
GridSpec load_grid_config(const std::string& path);

// Canonical serialization: parsing it back yields an identical configuration.
// Doubles are printed with 17 significant digits.
std::string config_to_text(const TrainConfig& cfg);
std::string grid_to_text(const GridSpec& grid);

}  // namespace lgelu
