#pragma once

#include <vector>

namespace gmxb {

/// Gauss-Hermite rule for integrals of the form ∫ exp(-x²) f(x) dx.
///
/// Nodes are the roots of the Hermite polynomial H_q, sorted ascending and
/// symmetric about zero. Weights sum to √π.
struct Quadrature {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    // Σ λᵢ f(ξᵢ)
    template <typename F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (int i = 0; i < order; ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

inline constexpr int kMaxHermiteOrder = 64;

// Throws ParameterError unless 1 <= q <= 64.
Quadrature gauss_hermite(int q);

}  // namespace gmxb
