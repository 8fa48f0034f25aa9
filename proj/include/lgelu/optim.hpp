#pragma once

#include <cstdint>
#include <vector>

#include "lgelu/network.hpp"

namespace lgelu {

enum class OptimizerKind { Sgd, AdamW };

const char* to_string(OptimizerKind kind);

// Three structural parameter groups:
//   weights  -- rate lr_weights, decoupled weight decay
//   biases   -- rate lr_weights, no decay
//   hardness -- rate multiplier_c * lr_weights, no decay, skipped when frozen
struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Sgd;
    double lr_weights = 0.05;   // eta_w
    double multiplier_c = 1.0;  // eta_s = multiplier_c * eta_w; 0 disables hardness learning
    double weight_decay = 0.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    double lr_hardness() const { return multiplier_c * lr_weights; }
    void validate() const;
};

class Optimizer {
public:
    Optimizer(const NetworkState& net, OptimizerConfig cfg);

    // One update from a full GradientSet. Rejects shape mismatches and
    // non-finite gradients with a diagnostic. Frozen hardness parameters
    // receive neither an update nor moment accumulation.
    void step(NetworkState& net, const GradientSet& grads);

    long step_count() const { return steps_; }
    const OptimizerConfig& config() const { return cfg_; }

private:
    struct LayerMoments {
        Matrix m_w, v_w;
        Vector m_b, v_b;
        double m_s = 0.0, v_s = 0.0;
    };

    OptimizerConfig cfg_;
    std::vector<LayerMoments> moments_;  // populated for AdamW only
    long steps_ = 0;
};

}  // namespace lgelu
