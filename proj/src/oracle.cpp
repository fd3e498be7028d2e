#include "twcr/oracle.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <array>
#include <cmath>
#include <stdexcept>

#include "twcr/constants.hpp"
#include "twcr/quadrature.hpp"

namespace twcr::oracle {

using constants::c;
using constants::pi;

long double bessel_series(int n, long double x) {
    const bool odd = (n < 0) && (-n % 2);
    n = std::abs(n);
    const long double h = x / 2;
    long double term = 1;
    for (int k = 1; k <= n; ++k) term *= h / k;
    long double sum = 0;
    for (int k = 0; k < 400; ++k) {
        sum += term;
        term *= -h * h / ((k + 1.0L) * (n + k + 1.0L));
        if (k > h && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return odd ? -sum : sum;
}

DampedResult damped_z_integral(int m, double D, double B) {
    if (!(D > B && B > 0.0)) throw std::invalid_argument("damped_z_integral needs D > B > 0");
    // The undamped value is ~1e7 times smaller than the integral of |f| at
    // large m and D/B, so everything is accumulated in extended precision.
    using ld = long double;
    using cl = std::complex<ld>;
    constexpr int levels = 9;
    std::array<ld, levels> eta{};
    for (int k = 0; k < levels; ++k) eta[k] = 0.8L * (D - B) / std::ldexp(1.0L, k);
    std::array<cl, levels> acc{};
    const ld z_end = 42.0L / eta[levels - 1];
    const ld panel = 2.0L * pi / (D + B);
    const auto& gl = quadrature::gauss_legendre(16);
    const long panels = static_cast<long>(std::ceil(z_end / panel));
    for (long p = 0; p < panels; ++p) {
        const ld z0 = p * panel;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const ld z = z0 + 0.5L * panel * (gl.nodes[i] + 1.0L);
            const ld j = boost::math::cyl_bessel_j(m, B * z);
            const cl f = 0.5L * panel * static_cast<ld>(gl.weights[i]) * j * cl(std::cos(D * z), std::sin(D * z));
            for (int k = 0; k < levels; ++k) {
                const ld decay = eta[k] * z;
                if (decay < 45.0L) acc[k] += std::exp(-decay) * f;
            }
        }
    }
    // Neville extrapolation to eta = 0
    std::array<cl, levels> p = acc;
    cl previous = p[levels - 1];
    for (int col = 1; col < levels; ++col) {
        for (int i = 0; i + col < levels; ++i) {
            const ld xi = eta[i], xj = eta[i + col];
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
        if (col == levels - 2) previous = p[0];
    }
    return {cd(static_cast<double>(p[0].real()), static_cast<double>(p[0].imag())),
            static_cast<double>(std::abs(p[0] - previous))};
}

double bessel_reference(int n, double x) {
    using boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(boost::math::cyl_bessel_j(n, cpp_bin_float_50(x)));
}

cd phi_integral(PhiKind kind, int m, int m_s, int n, double f, double A_z, double Phi, bool imaginary_exponent,
                int nodes) {
    const cd s = imaginary_exponent ? cd{0.0, 1.0} : cd{1.0, 0.0};
    cd sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = 2.0 * pi * k / nodes;
        const double trig = kind == PhiKind::Cos ? std::cos(f + n * phi) : std::sin(f + n * phi);
        sum += trig * std::exp(cd{0.0, -(m - m_s) * phi} - s * A_z * std::cos(phi - Phi));
    }
    return sum * (2.0 * pi / nodes);
}

cd dipole_xy(const channeling::BlochState& initial, const channeling::BlochState& final_state, double lattice_constant,
             int nodes) {
    const int M = initial.coefficients.half();
    const int side = 2 * M + 1;
    const double L = 0.5 * lattice_constant;
    const auto& gl = quadrature::gauss_legendre(nodes);
    Eigen::VectorXd x(nodes), w(nodes);
    for (int i = 0; i < nodes; ++i) {
        x(i) = 0.5 * L * gl.nodes[static_cast<std::size_t>(i)];
        w(i) = 0.5 * L * gl.weights[static_cast<std::size_t>(i)];
    }
    auto field = [&](const channeling::BlochState& s) {
        // E(i, m) = exp(-i (k + g m) x_i); phi(x_i, y_j) = (E C E^T)(i, j)
        Eigen::MatrixXcd E(nodes, side), C(side, side);
        for (int i = 0; i < nodes; ++i)
            for (int m = -M; m <= M; ++m) E(i, m + M) = std::polar(1.0, -(s.k + s.g_unit * m) * x(i));
        for (int m = -M; m <= M; ++m)
            for (int n = -M; n <= M; ++n) C(m + M, n + M) = s.coefficients(m, n);
        return Eigen::MatrixXcd(E * C * E.transpose());
    };
    const Eigen::MatrixXcd fi = field(initial), ff = field(final_state);
    cd sum = 0.0;
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) sum += w(i) * w(j) * x(i) * x(j) * std::conj(ff(i, j)) * fi(i, j);
    return sum / (L * L);
}

cd amplitude(const channeling::Transition& t, const amplitude::PhotonQuantumNumbers& qn,
             const geometry::EmissionGeometry& geom, double Delta, double beta, int nodes) {
    cd sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        geometry::EmissionGeometry g = geom;
        g.theta_k = qn.theta_k;
        g.phi_k = 2.0 * pi * k / nodes;
        const auto K = geometry::wavevector_crystal(g);
        const std::array<cd, 3> a{t.omega_fi / c * K.ky * t.xy, t.omega_fi / c * K.kx * t.xy,
                                  beta * K.kx * K.ky * t.xy};
        const auto eps = geometry::polarization_twcr(qn.lambda, qn.theta_k, g.phi_k, g.Theta, g.Phi);
        cd dot = 0.0;
        for (int i = 0; i < 3; ++i) dot += a[static_cast<std::size_t>(i)] * std::conj(eps[i]);
        sum += std::polar(1.0, -qn.m * g.phi_k) * dot * cd{0.0, 1.0} / (Delta - K.kz);
    }
    return sum * (2.0 * pi / nodes);
}

}  // namespace twcr::oracle
