#pragma once

#include <vector>

namespace twcr::quadrature {

// Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Rules are computed once per order and cached; the reference stays valid
// for the life of the program.
const Rule& gauss_legendre(int n);

}  // namespace twcr::quadrature
