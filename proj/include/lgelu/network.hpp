#pragma once

#include <cstddef>
#include <vector>

#include "lgelu/activation.hpp"
#include "lgelu/reparam.hpp"
#include "lgelu/rng.hpp"

namespace lgelu {

// Dense row-major matrix, the only linear-algebra type the network needs.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

using Vector = std::vector<double>;

// One affine layer plus its gate hardness. The hardness parameter of the
// final layer is inert: the network emits raw logits there.
struct LayerState {
    Matrix weights;  // [out x in]
    Vector bias;     // [out]
    HardnessParam hardness;
};

class NetworkState {
public:
    NetworkState() = default;

    // layer_sizes = [d0, d1, ..., dL]: L affine layers; layers 0..L-2 are each
    // followed by an activation carrying one hardness parameter. Weights are
    // uniform in [-a, a] with a = sqrt(6/(fan_in+fan_out)), biases zero.
    NetworkState(const std::vector<int>& layer_sizes, ActivationKind kind,
                 const std::vector<HardnessParam>& hardness, SplitMix64& init_rng);

    // Assemble from explicit layers (checkpoint loading); validates that
    // consecutive layer dimensions chain.
    static NetworkState from_layers(std::vector<LayerState> layers, ActivationKind kind);

    int num_layers() const { return static_cast<int>(layers_.size()); }
    int num_activation_layers() const { return num_layers() > 0 ? num_layers() - 1 : 0; }
    int input_dim() const { return layers_.empty() ? 0 : layers_.front().weights.cols; }
    int output_dim() const { return layers_.empty() ? 0 : layers_.back().weights.rows; }

    ActivationKind activation() const { return activation_; }
    void set_activation(ActivationKind kind) { activation_ = kind; }

    LayerState& layer(int l) { return layers_[static_cast<std::size_t>(l)]; }
    const LayerState& layer(int l) const { return layers_[static_cast<std::size_t>(l)]; }

    // Gate hardness used by layer l's activation under the current
    // ActivationKind (1 for Gelu, the parameter's effective value otherwise).
    double effective_lambda(int l) const;

    // Effective lambda of every activation layer, in depth order.
    std::vector<double> hardness_profile() const;

private:
    std::vector<LayerState> layers_;
    ActivationKind activation_ = ActivationKind::LambdaGelu;
};

// Per-layer inputs and pre-activations retained by forward for the matching
// backward pass.
struct ForwardCache {
    std::vector<Vector> inputs;   // inputs[l]: input vector of affine layer l
    std::vector<Vector> preacts;  // preacts[l]: W x + b of layer l
};

struct LayerGradients {
    Matrix weights;
    Vector bias;
    double s = 0.0;
};

struct GradientSet {
    std::vector<LayerGradients> layers;

    GradientSet& operator+=(const GradientSet& other);
    void scale(double factor);
};

GradientSet zero_gradients(const NetworkState& net);

// logits = composition of affine maps and activations; the final layer applies
// no activation. Throws std::invalid_argument on an input dimension mismatch.
Vector forward(const NetworkState& net, const Vector& input, ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of a scalar loss given dL/dlogits. The
// s-gradient of layer l is sum_i delta_i * z_i^2 * phi(lambda z_i) * sigma(s/t)/t,
// and is zero for frozen parameters and for non-learnable activation kinds.
GradientSet backward(const NetworkState& net, const ForwardCache& cache, const Vector& loss_grad);

struct LossResult {
    double loss = 0.0;
    Vector grad;
};

// Cross-entropy of a single sample in stable log-sum-exp form;
// grad = softmax(logits) - one_hot(label).
LossResult loss_cross_entropy(const Vector& logits, int label);

}  // namespace lgelu
