#include "gmxb/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmxb/errors.hpp"

namespace gmxb {

namespace {

// Orthonormal Hermite recurrence h̃_j(x) = x√(2/j) h̃_{j-1} − √((j−1)/j) h̃_{j-2}.
// Returns {h̃_q(x), h̃_{q-1}(x)}.
std::pair<double, double> hermite_normalized(int q, double x) {
    double p1 = 1.0 / std::pow(std::numbers::pi, 0.25);
    double p2 = 0.0;
    for (int j = 1; j <= q; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt(static_cast<double>(j - 1) / j) * p3;
    }
    return {p1, p2};
}

}  // namespace

Quadrature gauss_hermite(int q) {
    if (q < 1 || q > kMaxHermiteOrder) {
        throw ParameterError("gauss_hermite: order must be in [1, 64], got " + std::to_string(q));
    }
    Quadrature rule;
    rule.order = q;
    rule.nodes.assign(q, 0.0);
    rule.weights.assign(q, 0.0);

    const int half = (q + 1) / 2;
    double z = 0.0;
    // Roots are found from the largest downwards; initial guesses follow the
    // classical asymptotic estimates for the extreme Hermite roots.
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * q + 1.0) - 1.85575 * std::pow(2.0 * q + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(q), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[q - 1];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[q - 2];
        } else {
            z = 2.0 * z - rule.nodes[q - i + 1];
        }
        double hq_minus_1 = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [hq, hqm1] = hermite_normalized(q, z);
            const double derivative = std::sqrt(2.0 * q) * hqm1;
            const double step = hq / derivative;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        hq_minus_1 = hermite_normalized(q, z).second;
        // λ = 2^{q-1} q! √π / (q² H_{q-1}(ξ)²) expressed with the orthonormal h̃_{q-1}.
        const double w = 1.0 / (q * hq_minus_1 * hq_minus_1);
        rule.nodes[q - 1 - i] = z;
        rule.nodes[i] = -z;
        rule.weights[q - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

}  // namespace gmxb
