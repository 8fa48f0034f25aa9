#pragma once

#include <stdexcept>
#include <string_view>

#include "lgelu/gate_math.hpp"

namespace lgelu {

enum class ActivationKind { LambdaGelu, Gelu, Relu };

const char* to_string(ActivationKind kind);

// x * Phi(lambda*x). Equals GELU at lambda = 1 and approaches ReLU as
// lambda grows; lambda < 1 is outside the family.
inline double lambda_gelu(double x, double lambda) {
    if (!(lambda >= 1.0)) {
        throw std::invalid_argument("lambda_gelu: lambda must be >= 1");
    }
    return x * normal_cdf(lambda * x);
}

// d/dx [x * Phi(lambda*x)] = Phi(lambda*x) + lambda*x*phi(lambda*x)
inline double lambda_gelu_dx(double x, double lambda) {
    if (!(lambda >= 1.0)) {
        throw std::invalid_argument("lambda_gelu_dx: lambda must be >= 1");
    }
    const double lx = lambda * x;
    return normal_cdf(lx) + lx * normal_pdf(lx);
}

// d/dlambda [x * Phi(lambda*x)] = x^2 * phi(lambda*x), non-negative everywhere.
inline double lambda_gelu_dlambda(double x, double lambda) {
    if (!(lambda >= 1.0)) {
        throw std::invalid_argument("lambda_gelu_dlambda: lambda must be >= 1");
    }
    return x * x * normal_pdf(lambda * x);
}

inline double relu(double x) {
    return x > 0.0 ? x : 0.0;
}

class NetworkState;

// Copy of `net` whose every activation site applies `target` instead.
// Weights, biases and hardness parameters are untouched; the input network
// is not modified.
NetworkState substitute_activation(const NetworkState& net, ActivationKind target);

}  // namespace lgelu
