#pragma once

#include <vector>

namespace dsm {

// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rules for 1 <= n <= 128; thread-safe after first use.
const GaussRule& gauss_legendre(int n);

} // namespace dsm
