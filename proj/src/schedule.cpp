#include "lgelu/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lgelu {

AnnealPlan AnnealPlan::make(int total_epochs, double switch_fraction, double lambda_target) {
    if (total_epochs < 2) {
        throw std::invalid_argument("AnnealPlan: need at least 2 epochs to anneal");
    }
    if (!(switch_fraction > 0.0 && switch_fraction < 1.0)) {
        throw std::invalid_argument("AnnealPlan: switch_fraction must lie in (0, 1)");
    }
    if (!(lambda_target > 1.0)) {
        throw std::invalid_argument("AnnealPlan: lambda_target must be > 1");
    }
    AnnealPlan plan;
    plan.total_epochs = total_epochs;
    plan.switch_epoch = std::clamp(static_cast<int>(std::floor(switch_fraction * total_epochs)), 1,
                                   total_epochs - 1);
    plan.lambda_target = lambda_target;
    return plan;
}

double lambda_at(const AnnealPlan& plan, int layer, int epoch) {
    if (!plan.captured()) {
        throw std::logic_error("lambda_at: schedule not yet switched (no captured profile)");
    }
    if (layer < 0 || layer >= static_cast<int>(plan.captured_lambdas.size())) {
        throw std::out_of_range("lambda_at: layer index " + std::to_string(layer) + " out of range");
    }
    if (epoch <= plan.switch_epoch || epoch > plan.total_epochs) {
        throw std::out_of_range("lambda_at: epoch " + std::to_string(epoch) +
                                " outside annealed phase (" + std::to_string(plan.switch_epoch + 1) +
                                ".." + std::to_string(plan.total_epochs) + ")");
    }
    const double start = plan.captured_lambdas[static_cast<std::size_t>(layer)];
    // (1-u)*start + u*target reaches the target exactly at u = 1 and the exact
    // arithmetic midpoint at u = 1/2, unlike start + u*(target-start).
    const double u = static_cast<double>(epoch - plan.switch_epoch) /
                     static_cast<double>(plan.total_epochs - plan.switch_epoch);
    return (1.0 - u) * start + u * plan.lambda_target;
}

void apply_phase(AnnealPlan& plan, NetworkState& net, int epoch) {
    if (epoch < 1 || epoch > plan.total_epochs) {
        throw std::out_of_range("apply_phase: epoch " + std::to_string(epoch) + " outside 1.." +
                                std::to_string(plan.total_epochs));
    }
    const int num_act = net.num_activation_layers();
    if (epoch <= plan.switch_epoch) {
        for (int l = 0; l < num_act; ++l) {
            net.layer(l).hardness.unfreeze();
        }
        return;
    }
    if (!plan.captured()) {
        plan.captured_lambdas.reserve(static_cast<std::size_t>(num_act));
        for (int l = 0; l < num_act; ++l) {
            plan.captured_lambdas.push_back(net.layer(l).hardness.lambda());
        }
        for (int l = 0; l < num_act; ++l) {
            net.layer(l).hardness.freeze();
        }
    }
    for (int l = 0; l < num_act; ++l) {
        net.layer(l).hardness.pin_lambda(lambda_at(plan, l, epoch));
    }
}

SubstitutionResult evaluate_substitution(const NetworkState& net_at_best,
                                         const std::function<double(const NetworkState&)>& metric) {
    SubstitutionResult result;
    result.original_metric = metric(net_at_best);
    const NetworkState swapped = substitute_activation(net_at_best, ActivationKind::Relu);
    result.substituted_metric = metric(swapped);
    return result;
}

}  // namespace lgelu
