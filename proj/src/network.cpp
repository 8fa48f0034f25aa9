#include "lgelu/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lgelu {

NetworkState::NetworkState(const std::vector<int>& layer_sizes, ActivationKind kind,
                           const std::vector<HardnessParam>& hardness, SplitMix64& init_rng)
    : activation_(kind) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("NetworkState: need at least [input, output] layer sizes");
    }
    for (int d : layer_sizes) {
        if (d < 1) {
            throw std::invalid_argument("NetworkState: layer sizes must be positive");
        }
    }
    const int num_affine = static_cast<int>(layer_sizes.size()) - 1;
    if (static_cast<int>(hardness.size()) != num_affine - 1) {
        throw std::invalid_argument("NetworkState: expected one hardness parameter per hidden layer (" +
                                    std::to_string(num_affine - 1) + "), got " +
                                    std::to_string(hardness.size()));
    }
    layers_.reserve(static_cast<std::size_t>(num_affine));
    for (int l = 0; l < num_affine; ++l) {
        const int fan_in = layer_sizes[static_cast<std::size_t>(l)];
        const int fan_out = layer_sizes[static_cast<std::size_t>(l) + 1];
        LayerState layer;
        layer.weights = Matrix(fan_out, fan_in);
        layer.bias.assign(static_cast<std::size_t>(fan_out), 0.0);
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& w : layer.weights.data) {
            w = init_rng.uniform(-a, a);
        }
        layer.hardness = l < num_affine - 1 ? hardness[static_cast<std::size_t>(l)]
                                            : HardnessParam(0.0, hardness.empty() ? 0.1 : hardness.front().t());
        layers_.push_back(std::move(layer));
    }
}

NetworkState NetworkState::from_layers(std::vector<LayerState> layers, ActivationKind kind) {
    if (layers.size() < 1) {
        throw std::invalid_argument("from_layers: need at least one layer");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const LayerState& layer = layers[l];
        if (layer.weights.rows < 1 || layer.weights.cols < 1 ||
            layer.bias.size() != static_cast<std::size_t>(layer.weights.rows)) {
            throw std::invalid_argument("from_layers: inconsistent shapes in layer " + std::to_string(l));
        }
        if (l > 0 && layers[l - 1].weights.rows != layer.weights.cols) {
            throw std::invalid_argument("from_layers: layer dimensions do not chain at layer " +
                                        std::to_string(l));
        }
    }
    NetworkState net;
    net.layers_ = std::move(layers);
    net.activation_ = kind;
    return net;
}

double NetworkState::effective_lambda(int l) const {
    switch (activation_) {
        case ActivationKind::Gelu:
            return 1.0;
        case ActivationKind::LambdaGelu:
        case ActivationKind::Relu:
        default:
            return layers_[static_cast<std::size_t>(l)].hardness.lambda();
    }
}

std::vector<double> NetworkState::hardness_profile() const {
    std::vector<double> profile;
    profile.reserve(static_cast<std::size_t>(num_activation_layers()));
    for (int l = 0; l < num_activation_layers(); ++l) {
        profile.push_back(effective_lambda(l));
    }
    return profile;
}

GradientSet& GradientSet::operator+=(const GradientSet& other) {
    if (layers.size() != other.layers.size()) {
        throw std::invalid_argument("GradientSet::operator+=: layer count mismatch");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        LayerGradients& a = layers[l];
        const LayerGradients& b = other.layers[l];
        for (std::size_t i = 0; i < a.weights.data.size(); ++i) {
            a.weights.data[i] += b.weights.data[i];
        }
        for (std::size_t i = 0; i < a.bias.size(); ++i) {
            a.bias[i] += b.bias[i];
        }
        a.s += b.s;
    }
    return *this;
}

void GradientSet::scale(double factor) {
    for (LayerGradients& g : layers) {
        for (double& w : g.weights.data) {
            w *= factor;
        }
        for (double& b : g.bias) {
            b *= factor;
        }
        g.s *= factor;
    }
}

GradientSet zero_gradients(const NetworkState& net) {
    GradientSet grads;
    grads.layers.resize(static_cast<std::size_t>(net.num_layers()));
    for (int l = 0; l < net.num_layers(); ++l) {
        const LayerState& layer = net.layer(l);
        grads.layers[static_cast<std::size_t>(l)].weights = Matrix(layer.weights.rows, layer.weights.cols);
        grads.layers[static_cast<std::size_t>(l)].bias.assign(layer.bias.size(), 0.0);
    }
    return grads;
}

namespace {

void affine(const LayerState& layer, const Vector& x, Vector& z) {
    const int rows = layer.weights.rows;
    const int cols = layer.weights.cols;
    z.assign(static_cast<std::size_t>(rows), 0.0);
    for (int r = 0; r < rows; ++r) {
        double acc = layer.bias[static_cast<std::size_t>(r)];
        const double* w = &layer.weights.data[static_cast<std::size_t>(r) * cols];
        for (int c = 0; c < cols; ++c) {
            acc += w[c] * x[static_cast<std::size_t>(c)];
        }
        z[static_cast<std::size_t>(r)] = acc;
    }
}

}  // namespace

Vector forward(const NetworkState& net, const Vector& input, ForwardCache* cache) {
    if (net.num_layers() == 0) {
        throw std::invalid_argument("forward: empty network");
    }
    if (static_cast<int>(input.size()) != net.input_dim()) {
        throw std::invalid_argument("forward: input dimension " + std::to_string(input.size()) +
                                    " does not match first layer (" + std::to_string(net.input_dim()) + ")");
    }
    if (cache != nullptr) {
        cache->inputs.assign(static_cast<std::size_t>(net.num_layers()), Vector{});
        cache->preacts.assign(static_cast<std::size_t>(net.num_layers()), Vector{});
    }
    Vector x = input;
    Vector z;
    for (int l = 0; l < net.num_layers(); ++l) {
        if (cache != nullptr) {
            cache->inputs[static_cast<std::size_t>(l)] = x;
        }
        affine(net.layer(l), x, z);
        if (cache != nullptr) {
            cache->preacts[static_cast<std::size_t>(l)] = z;
        }
        if (l < net.num_layers() - 1) {
            x.assign(z.size(), 0.0);
            if (net.activation() == ActivationKind::Relu) {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    x[i] = relu(z[i]);
                }
            } else {
                const double lambda = net.effective_lambda(l);
                for (std::size_t i = 0; i < z.size(); ++i) {
                    x[i] = lambda_gelu(z[i], lambda);
                }
            }
        } else {
            x = z;
        }
    }
    return x;
}

GradientSet backward(const NetworkState& net, const ForwardCache& cache, const Vector& loss_grad) {
    const int num_layers = net.num_layers();
    if (static_cast<int>(cache.inputs.size()) != num_layers ||
        static_cast<int>(cache.preacts.size()) != num_layers) {
        throw std::invalid_argument("backward: cache does not match network (stale or missing forward)");
    }
    if (static_cast<int>(loss_grad.size()) != net.output_dim()) {
        throw std::invalid_argument("backward: loss gradient dimension mismatch");
    }

    GradientSet grads = zero_gradients(net);
    Vector delta = loss_grad;  // dL/d(output of layer l), starts at the logits
    for (int l = num_layers - 1; l >= 0; --l) {
        const LayerState& layer = net.layer(l);
        const Vector& x = cache.inputs[static_cast<std::size_t>(l)];
        const Vector& z = cache.preacts[static_cast<std::size_t>(l)];
        if (z.size() != layer.bias.size() || x.size() != static_cast<std::size_t>(layer.weights.cols)) {
            throw std::invalid_argument("backward: cache shapes do not match layer " + std::to_string(l));
        }

        Vector dz;
        if (l < num_layers - 1) {
            // delta currently holds dL/da for the activation after this layer.
            dz.assign(z.size(), 0.0);
            if (net.activation() == ActivationKind::Relu) {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    dz[i] = z[i] > 0.0 ? delta[i] : 0.0;
                }
            } else {
                const double lambda = net.effective_lambda(l);
                double dloss_dlambda = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) {
                    dz[i] = delta[i] * lambda_gelu_dx(z[i], lambda);
                    dloss_dlambda += delta[i] * lambda_gelu_dlambda(z[i], lambda);
                }
                const HardnessParam& h = layer.hardness;
                if (net.activation() == ActivationKind::LambdaGelu && !h.frozen()) {
                    grads.layers[static_cast<std::size_t>(l)].s = dloss_dlambda * h.dlambda_ds();
                }
            }
        } else {
            dz = delta;
        }

        LayerGradients& g = grads.layers[static_cast<std::size_t>(l)];
        const int rows = layer.weights.rows;
        const int cols = layer.weights.cols;
        for (int r = 0; r < rows; ++r) {
            const double d = dz[static_cast<std::size_t>(r)];
            g.bias[static_cast<std::size_t>(r)] = d;
            double* gw = &g.weights.data[static_cast<std::size_t>(r) * cols];
            for (int c = 0; c < cols; ++c) {
                gw[c] = d * x[static_cast<std::size_t>(c)];
            }
        }
        if (l > 0) {
            Vector prev(static_cast<std::size_t>(cols), 0.0);
            for (int r = 0; r < rows; ++r) {
                const double d = dz[static_cast<std::size_t>(r)];
                const double* w = &layer.weights.data[static_cast<std::size_t>(r) * cols];
                for (int c = 0; c < cols; ++c) {
                    prev[static_cast<std::size_t>(c)] += w[c] * d;
                }
            }
            delta = std::move(prev);
        }
    }
    return grads;
}

LossResult loss_cross_entropy(const Vector& logits, int label) {
    if (logits.empty()) {
        throw std::invalid_argument("loss_cross_entropy: empty logits");
    }
    if (label < 0 || label >= static_cast<int>(logits.size())) {
        throw std::invalid_argument("loss_cross_entropy: label " + std::to_string(label) +
                                    " out of range for " + std::to_string(logits.size()) + " classes");
    }
    double max_logit = logits[0];
    for (double v : logits) {
        max_logit = std::fmax(max_logit, v);
    }
    double sum_exp = 0.0;
    for (double v : logits) {
        sum_exp += std::exp(v - max_logit);
    }
    const double log_sum_exp = max_logit + std::log(sum_exp);

    LossResult result;
    result.loss = log_sum_exp - logits[static_cast<std::size_t>(label)];
    result.grad.assign(logits.size(), 0.0);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        result.grad[i] = std::exp(logits[i] - max_logit) / sum_exp;
    }
    result.grad[static_cast<std::size_t>(label)] -= 1.0;
    return result;
}

}  // namespace lgelu
