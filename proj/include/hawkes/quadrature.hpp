#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes on [lo, hi]. Nodes are ascending.
QuadratureRule gauss_legendre(std::size_t n, double lo, double hi);

}  // namespace hawkes
