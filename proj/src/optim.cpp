#include "lgelu/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lgelu/errors.hpp"

namespace lgelu {

const char* to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Sgd:
            return "sgd";
        case OptimizerKind::AdamW:
            return "adamw";
    }
    return "unknown";
}

void OptimizerConfig::validate() const {
    if (!(lr_weights > 0.0)) {
        throw std::invalid_argument("OptimizerConfig: lr_weights must be > 0");
    }
    if (!(multiplier_c >= 0.0)) {
        throw std::invalid_argument("OptimizerConfig: multiplier_c must be >= 0");
    }
    if (!(weight_decay >= 0.0)) {
        throw std::invalid_argument("OptimizerConfig: weight_decay must be >= 0");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        throw std::invalid_argument("OptimizerConfig: betas must lie in [0, 1)");
    }
    if (!(adam_eps > 0.0)) {
        throw std::invalid_argument("OptimizerConfig: adam_eps must be > 0");
    }
}

Optimizer::Optimizer(const NetworkState& net, OptimizerConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.kind == OptimizerKind::AdamW) {
        moments_.resize(static_cast<std::size_t>(net.num_layers()));
        for (int l = 0; l < net.num_layers(); ++l) {
            const LayerState& layer = net.layer(l);
            LayerMoments& m = moments_[static_cast<std::size_t>(l)];
            m.m_w = Matrix(layer.weights.rows, layer.weights.cols);
            m.v_w = Matrix(layer.weights.rows, layer.weights.cols);
            m.m_b.assign(layer.bias.size(), 0.0);
            m.v_b.assign(layer.bias.size(), 0.0);
        }
    }
}

namespace {

void check_finite(double g, int layer, const char* group) {
    if (!std::isfinite(g)) {
        throw DivergenceError("non-finite gradient in layer " + std::to_string(layer) + " (" + group + ")");
    }
}

}  // namespace

void Optimizer::step(NetworkState& net, const GradientSet& grads) {
    if (static_cast<int>(grads.layers.size()) != net.num_layers()) {
        throw std::invalid_argument("Optimizer::step: gradient/parameter layer count mismatch");
    }
    const double eta_w = cfg_.lr_weights;
    const double eta_s = cfg_.lr_hardness();
    const double wd = cfg_.weight_decay;
    ++steps_;

    for (int l = 0; l < net.num_layers(); ++l) {
        LayerState& layer = net.layer(l);
        const LayerGradients& g = grads.layers[static_cast<std::size_t>(l)];
        if (g.weights.rows != layer.weights.rows || g.weights.cols != layer.weights.cols ||
            g.bias.size() != layer.bias.size()) {
            throw std::invalid_argument("Optimizer::step: gradient shape mismatch in layer " +
                                        std::to_string(l));
        }
        for (double v : g.weights.data) {
            check_finite(v, l, "weights");
        }
        for (double v : g.bias) {
            check_finite(v, l, "bias");
        }
        check_finite(g.s, l, "hardness");

        const bool update_s = l < net.num_layers() - 1 && !layer.hardness.frozen();

        if (cfg_.kind == OptimizerKind::Sgd) {
            for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
                const double grad = g.weights.data[i] + wd * layer.weights.data[i];
                layer.weights.data[i] -= eta_w * grad;
            }
            for (std::size_t i = 0; i < layer.bias.size(); ++i) {
                layer.bias[i] -= eta_w * g.bias[i];
            }
            if (update_s) {
                layer.hardness.set_s(layer.hardness.s() - eta_s * g.s);
            }
        } else {
            LayerMoments& m = moments_[static_cast<std::size_t>(l)];
            const double b1 = cfg_.adam_beta1;
            const double b2 = cfg_.adam_beta2;
            const double eps = cfg_.adam_eps;
            const double bc1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
            const double bc2 = 1.0 - std::pow(b2, static_cast<double>(steps_));

            auto adam_update = [&](double grad, double& m1, double& m2) {
                m1 = b1 * m1 + (1.0 - b1) * grad;
                m2 = b2 * m2 + (1.0 - b2) * grad * grad;
                const double m_hat = m1 / bc1;
                const double v_hat = m2 / bc2;
                return m_hat / (std::sqrt(v_hat) + eps);
            };

            for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
                // Decoupled decay: applied to the parameter, not the gradient.
                layer.weights.data[i] -= eta_w * wd * layer.weights.data[i];
                layer.weights.data[i] -= eta_w * adam_update(g.weights.data[i], m.m_w.data[i], m.v_w.data[i]);
            }
            for (std::size_t i = 0; i < layer.bias.size(); ++i) {
                layer.bias[i] -= eta_w * adam_update(g.bias[i], m.m_b[i], m.v_b[i]);
            }
            if (update_s) {
                layer.hardness.set_s(layer.hardness.s() - eta_s * adam_update(g.s, m.m_s, m.v_s));
            }
        }
    }
}

}  // namespace lgelu
