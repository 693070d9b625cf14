#include "hawkes/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hawkes {

QuadratureRule gauss_legendre(std::size_t n, double lo, double hi) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    if (!(hi > lo)) throw std::invalid_argument("gauss_legendre: empty interval");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    const std::size_t m = (n + 1) / 2;

    for (std::size_t i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace hawkes
