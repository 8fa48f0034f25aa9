#pragma once

#include <functional>
#include <vector>

#include "lgelu/network.hpp"

namespace lgelu {

// Deterministic hardening plan: hardness is learnable through epoch
// switch_epoch, then frozen and driven linearly from its captured value to
// lambda_target by the final epoch. Epochs are 1-based.
struct AnnealPlan {
    int total_epochs = 0;                   // T
    int switch_epoch = 0;                   // e_s, 1 <= e_s < T
    double lambda_target = 0.0;             // > 1
    std::vector<double> captured_lambdas;   // per activation layer, set at the switch

    // switch_fraction defaults to 0.25: e_s = floor(switch_fraction * T),
    // clamped into [1, T-1].
    static AnnealPlan make(int total_epochs, double switch_fraction, double lambda_target);

    bool captured() const { return !captured_lambdas.empty(); }
};

// lambda of `layer` at epoch e in the annealed phase (switch_epoch < e <= T):
// linear interpolation from the captured lambda to lambda_target, hitting
// lambda_target exactly at e = T. Querying outside the annealed phase or
// before capture throws std::out_of_range / std::logic_error.
double lambda_at(const AnnealPlan& plan, int layer, int epoch);

// Phase transition hook, called once at the start of every epoch.
//   e <= switch_epoch: hardness learnable, lambda comes from s.
//   e >  switch_epoch: on first call captures the layerwise lambda profile,
//   freezes every hardness parameter, and from then on pins each layer's
//   effective lambda to lambda_at(plan, layer, e).
void apply_phase(AnnealPlan& plan, NetworkState& net, int epoch);

struct SubstitutionResult {
    double original_metric = 0.0;
    double substituted_metric = 0.0;
};

// Evaluates a checkpoint twice with no parameter updates in between: once
// with its current activation and once after substituting ReLU everywhere.
SubstitutionResult evaluate_substitution(const NetworkState& net_at_best,
                                         const std::function<double(const NetworkState&)>& metric);

}  // namespace lgelu
