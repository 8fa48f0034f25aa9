#include "lgelu/activation.hpp"

#include "lgelu/network.hpp"

namespace lgelu {

const char* to_string(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::LambdaGelu:
            return "lambda_gelu";
        case ActivationKind::Gelu:
            return "gelu";
        case ActivationKind::Relu:
            return "relu";
    }
    return "unknown";
}

const char* to_string(InitMode mode) {
    switch (mode) {
        case InitMode::Uniform:
            return "uniform";
        case InitMode::Increasing:
            return "increasing";
        case InitMode::Decreasing:
            return "decreasing";
    }
    return "unknown";
}

NetworkState substitute_activation(const NetworkState& net, ActivationKind target) {
    NetworkState copy = net;
    copy.set_activation(target);
    return copy;
}

}  // namespace lgelu
