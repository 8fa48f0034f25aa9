#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lgelu/gate_math.hpp"

namespace lgelu {

// lambda(s) = 1 + softplus(s/t), the constrained map from the unconstrained
// hardness variable s to a gate hardness lambda > 1.
inline double lambda_from_s(double s, double t) {
    return 1.0 + softplus_stable(s / t);
}

// d lambda / d s = sigmoid(s/t) / t, strictly positive and bounded by 1/t.
inline double dlambda_ds(double s, double t) {
    return sigmoid(s / t) / t;
}

// Inverse of lambda_from_s: s = t * log(e^(lambda-1) - 1). Stable for both
// lambda near 1 (expm1 path) and very large lambda (log1p path, no overflow).
// lambda = 1 would need s = -infinity and is rejected.
inline double s_for_lambda(double lambda, double t) {
    if (!(lambda > 1.0)) {
        throw std::invalid_argument("s_for_lambda: lambda must be > 1 strictly");
    }
    if (!(t > 0.0)) {
        throw std::invalid_argument("s_for_lambda: temperature must be > 0");
    }
    const double d = lambda - 1.0;
    const double z = d > 0.6931471805599453
                         ? d + std::log1p(-std::exp(-d))
                         : std::log(std::expm1(d));
    return t * z;
}

// One per-layer gate hardness variable. The temperature t is a fixed
// hyperparameter. While frozen, gradient updates to s must be skipped and the
// effective lambda may be pinned by an external schedule instead of being
// recomputed from s.
class HardnessParam {
public:
    HardnessParam() : HardnessParam(0.0, 0.1) {}

    HardnessParam(double s, double t) : s_(s), t_(t) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("HardnessParam: temperature must be > 0");
        }
    }

    double s() const { return s_; }
    double t() const { return t_; }
    bool frozen() const { return frozen_; }
    bool pinned() const { return pinned_lambda_.has_value(); }

    // Effective gate hardness: the schedule pin when present, 1 + softplus(s/t)
    // otherwise.
    double lambda() const {
        return pinned_lambda_ ? *pinned_lambda_ : lambda_from_s(s_, t_);
    }

    double dlambda_ds() const { return lgelu::dlambda_ds(s_, t_); }

    void set_s(double s) { s_ = s; }

    void freeze() { frozen_ = true; }

    void unfreeze() {
        frozen_ = false;
        pinned_lambda_.reset();
    }

    // Pin the effective lambda to a schedule-chosen value. Only meaningful on
    // a frozen parameter; lambda = 1 is allowed here (the hard/GELU limit is a
    // legitimate pin even though the s-map can only approach it).
    void pin_lambda(double lambda) {
        if (!frozen_) {
            throw std::logic_error("pin_lambda: parameter must be frozen first");
        }
        if (!(lambda >= 1.0)) {
            throw std::invalid_argument("pin_lambda: lambda must be >= 1");
        }
        pinned_lambda_ = lambda;
    }

private:
    double s_;
    double t_;
    bool frozen_ = false;
    std::optional<double> pinned_lambda_;
};

enum class InitMode { Uniform, Increasing, Decreasing };

const char* to_string(InitMode mode);

// Initial hardness profile across `num_layers` activation layers.
//   Uniform:    every layer at lambda0 = 1 + uniform_delta
//   Increasing: lambda linearly spaced from 1 + uniform_delta up to 2
//   Decreasing: the reverse of Increasing
// All parameters start unfrozen. uniform_delta keeps s finite; exactly
// lambda = 1 has no finite preimage under the softplus map.
inline std::vector<HardnessParam> init_profile(InitMode mode, int num_layers, double t,
                                               double uniform_delta = 1e-4) {
    if (num_layers < 1) {
        throw std::invalid_argument("init_profile: num_layers must be >= 1");
    }
    if (!(uniform_delta > 0.0)) {
        throw std::invalid_argument("init_profile: uniform_delta must be > 0");
    }
    const double lo = 1.0 + uniform_delta;
    const double hi = 2.0;
    std::vector<double> ladder(static_cast<std::size_t>(num_layers), lo);
    if (mode != InitMode::Uniform && num_layers > 1) {
        for (int i = 0; i < num_layers; ++i) {
            const double u = static_cast<double>(i) / (num_layers - 1);
            ladder[static_cast<std::size_t>(i)] = (1.0 - u) * lo + u * hi;
        }
        if (mode == InitMode::Decreasing) {
            std::reverse(ladder.begin(), ladder.end());
        }
    }
    std::vector<HardnessParam> params;
    params.reserve(ladder.size());
    for (double lambda : ladder) {
        params.emplace_back(s_for_lambda(lambda, t), t);
    }
    return params;
}

}  // namespace lgelu
