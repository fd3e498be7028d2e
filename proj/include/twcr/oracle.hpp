#pragma once

// Brute-force numerical references for the closed forms used by the
// library. Nothing here calls the code paths it is meant to check.

#include <complex>

#include "twcr/channeling.hpp"
#include "twcr/geometry.hpp"
#include "twcr/matrixelement.hpp"

namespace twcr::oracle {

using cd = std::complex<double>;

// J_n(x) by direct summation of the ascending series in long double.
long double bessel_series(int n, long double x);

// J_n(x) evaluated in 50-digit arithmetic and rounded to double.
double bessel_reference(int n, double x);

struct DampedResult {
    cd value;
    double extrapolation_error = 0.0;  // spread of the last two Neville estimates
};

// lim_{eta -> 0+} int_0^inf e^{i D Z - eta Z} J_m(B Z) dZ, evaluated in long
// double. 16-point Gauss-Legendre panels one period 2 pi / (D + B) wide, at
// nine damping levels eta_k = 0.8 (D - B) / 2^k, extrapolated to eta = 0 with
// Neville's algorithm. Requires D > B > 0.
DampedResult damped_z_integral(int m, double D, double B);

enum class PhiKind { Cos, Sin };

// int_0^{2pi} trig(f + n phi) e^{-i mu phi} e^{-s A_z cos(phi - Phi)} dphi,
// s = i when imaginary_exponent, else s = 1. Periodic trapezoid rule.
cd phi_integral(PhiKind kind, int m, int m_s, int n, double f, double A_z, double Phi, bool imaginary_exponent,
                int nodes = 512);

// (1/A) int over the string-centred cell of conj(phi_f) x y phi_i, Gauss-
// Legendre in each direction on the reconstructed wave functions.
cd dipole_xy(const channeling::BlochState& initial, const channeling::BlochState& final_state, double lattice_constant,
             int nodes = 256);

// Emission amplitude straight from its defining phi_k integral:
//   int dphi_k e^{-i m phi_k} alpha(K(phi_k)) . conj(eps_TW(phi_k)) i / (Delta - K_Z(phi_k)),
// the Z integral done in closed form for a constant phase. Needs
// Delta - A > B (transverse Bessel reading).
cd amplitude(const channeling::Transition& t, const amplitude::PhotonQuantumNumbers& qn,
             const geometry::EmissionGeometry& geom, double Delta, double beta, int nodes = 512);

}  // namespace twcr::oracle
