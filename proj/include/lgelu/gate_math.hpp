#pragma once

#include <cmath>
#include <stdexcept>

namespace lgelu {

inline constexpr double kSqrt2Pi = 2.50662827463100050242;   // sqrt(2*pi)
inline constexpr double kInvSqrt2 = 0.70710678118654752440;  // 1/sqrt(2)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Phi(z), the standard normal CDF. Computed through erfc so that both tails
// keep full precision down to the subnormal range.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * kInvSqrt2);
}

// phi(z), the standard normal density.
inline double normal_pdf(double z) {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

// log(1 + e^z) without overflow: max(z,0) + log1p(e^-|z|).
// Underflows to exactly 0 only for z below roughly -745.
inline double softplus_stable(double z) {
    return std::fmax(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

// 1/(1 + e^-z), overflow-safe on both tails.
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// L1 distance between the Heaviside gate (H(0) = 1/2) and the smooth gate
// Phi(lambda*x) over the whole real line:
//
//   integral |H(x) - Phi(lambda*x)| dx  =  2 / (lambda * sqrt(2*pi))
//
// Strictly decreasing in lambda.
inline double gate_l1_error(double lambda) {
    if (!(lambda >= 1.0)) {
        throw std::invalid_argument("gate_l1_error: lambda must be >= 1");
    }
    return 2.0 / (lambda * kSqrt2Pi);
}

// Smallest gate hardness whose L1 gate error meets the tolerance:
// lambda = 2 / (epsilon * sqrt(2*pi)), the exact inverse of gate_l1_error.
inline double lambda_target_for(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("lambda_target_for: epsilon must be > 0");
    }
    return 2.0 / (epsilon * kSqrt2Pi);
}

}  // namespace lgelu
