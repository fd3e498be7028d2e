#pragma once

#include <array>

namespace twcr::specfun {

// Largest |order| accepted by bessel_j.
inline constexpr int kBesselOrderCap = 64;

// Integer-order Bessel function of the first kind J_n(x).
// Ascending series for |x| < 12, Miller backward recurrence otherwise.
// Throws DomainError for |n| > kBesselOrderCap or non-finite x.
double bessel_j(int n, double x);

// j = 1 Wigner small d-matrix element d^1_{m_s, lambda}(theta).
// m_s in {-1, 0, 1}, lambda in {-1, 1}; anything else throws DomainError.
//
// Sign convention: d_{1,0} = -sin/sqrt2, d_{0,1} = +sin/sqrt2, i.e.
// sum_{m'} d_{m' q}(theta) chi_{m'} = R_y(theta) chi_q for the spherical
// basis returned by geometry::spin_basis.
double wigner_d1(int m_s, int lambda, double theta);

// Full 3x3 matrix, rows/cols indexed by m + 1 (so [0] is m = -1).
std::array<std::array<double, 3>, 3> wigner_d1_matrix(double theta);

// Unrestricted element lookup, both indices in {-1, 0, 1}.
double wigner_d1_any(int m1, int m2, double theta);

// Step function with H(0) = 0.
inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

}  // namespace twcr::specfun
