#include "twcr/matrixelement.hpp"

#include <cmath>
#include <fmt/format.h>

#include "twcr/constants.hpp"
#include "twcr/errors.hpp"
#include "twcr/specfun.hpp"

namespace twcr::amplitude {

using constants::c;
using constants::pi;

namespace {

const cd I{0.0, 1.0};

// i^p for any integer p.
cd ipow(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// (-i)^p e^{-i p Phi}
cd rotor(int p, double Phi) { return ipow(-p) * std::polar(1.0, -p * Phi); }

}  // namespace

void PhotonQuantumNumbers::validate() const {
    if (std::abs(m) > kMaxTam)
        throw DomainError(fmt::format("photon TAM projection |m| = {} exceeds {}", std::abs(m), kMaxTam));
    if (lambda != 1 && lambda != -1) throw DomainError("photon helicity must be +1 or -1");
    if (!(theta_k >= 0.0 && theta_k < 0.5 * pi)) throw DomainError("theta_k must lie in [0, pi/2)");
}

cd z_integral_gap(int m_o, double D, double B) {
    if (B < 0.0) throw DomainError("z_integral: B must be non-negative");
    if (specfun::heaviside(D) == 0.0 || D <= B) return 0.0;
    const int k = std::abs(m_o);
    if (k > specfun::kBesselOrderCap) throw DomainError("z_integral: order beyond cap");
    const double s = std::sqrt((D - B) * (D + B));
    cd v = I / s;
    if (k > 0) v *= std::pow(I * (B / (s + D)), k);
    if (m_o < 0 && (k % 2)) v = -v;
    return v;
}

cd z_integral(const ZIntegralParams& p) { return z_integral_gap(p.m_o, p.Delta - p.A, p.B); }

std::array<BesselTerm, 2> phi_integral_cos_terms(int m, int m_s, int n, double f, double Phi) {
    const int mu = m - m_s;
    return {{{mu - n, pi * std::polar(1.0, f) * rotor(mu - n, Phi)},
             {mu + n, pi * std::polar(1.0, -f) * rotor(mu + n, Phi)}}};
}

std::array<BesselTerm, 2> phi_integral_sin_terms(int m, int m_s, int n, double f, double Phi) {
    auto t = phi_integral_cos_terms(m, m_s, n, f, Phi);
    t[0].coefficient *= -I;
    t[1].coefficient *= I;
    return t;
}

namespace {

cd evaluate_terms(const std::array<BesselTerm, 2>& t, double A_z) {
    if (A_z < 0.0) throw DomainError("phi integral: A_z must be non-negative");
    return t[0].coefficient * specfun::bessel_j(t[0].order, A_z) +
           t[1].coefficient * specfun::bessel_j(t[1].order, A_z);
}

}  // namespace

cd phi_integral_cos(int m, int m_s, int n, double f, double A_z, double Phi) {
    return evaluate_terms(phi_integral_cos_terms(m, m_s, n, f, Phi), A_z);
}

cd phi_integral_sin(int m, int m_s, int n, double f, double A_z, double Phi) {
    return evaluate_terms(phi_integral_sin_terms(m, m_s, n, f, Phi), A_z);
}

cd phi_integral_cos_quoted(int m, int m_s, int n, double f, double A_z, double Phi) {
    const int mu = m - m_s;
    const cd pre = pi * ipow(m_s - n) * std::polar(1.0, -(f + Phi * (mu + n)));
    return pre * (std::polar(1.0, 2.0 * (f + n * Phi)) * specfun::bessel_j(mu - n, A_z) +
                  ipow(2 * n) * specfun::bessel_j(mu + n, A_z));
}

cd phi_integral_sin_quoted(int m, int m_s, int n, double f, double A_z, double Phi) {
    const int mu = m - m_s;
    const cd pre = pi * ipow(1 - m_s - n) * std::polar(1.0, -(f + Phi * (mu + n)));
    return pre * (std::polar(1.0, 2.0 * (f + n * Phi)) * specfun::bessel_j(mu - n, A_z) -
                  std::polar(1.0, n * pi) * specfun::bessel_j(mu + n, A_z));
}

CrystalVec alpha_fi(const Transition& t, const WaveVectorCrystal& K, double beta) {
    CrystalVec a;
    a[0] = t.omega_fi / c * K.ky * t.xy;
    a[1] = t.omega_fi / c * K.kx * t.xy;
    a[2] = beta * K.kx * K.ky * t.xy;
    return a;
}

HarmonicTable harmonic_table(double Theta, double Phi, double theta_k) {
    const auto R = geometry::basis_rotation(Theta, Phi);
    const double st = std::sin(theta_k), ct = std::cos(theta_k);
    // Fourier coefficients of the unit-cone wave vector, index j + 1
    std::array<std::array<cd, 3>, 3> k{};  // k[comp][j+1]
    for (int a = 0; a < 3; ++a) {
        k[a][0] = 0.5 * st * (R[a][0] + I * R[a][1]);
        k[a][1] = ct * R[a][2];
        k[a][2] = 0.5 * st * (R[a][0] - I * R[a][1]);
    }
    std::array<cd, 5> kxky{};
    for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 3; ++j2) kxky[j1 + j2] += k[0][j1] * k[1][j2];

    HarmonicTable h;
    for (int q = -1; q <= 1; ++q) {
        const auto eps = geometry::polarization_cr_basis(q, Theta, Phi);
        const cd ex = std::conj(eps[0]), ey = std::conj(eps[1]), ez = std::conj(eps[2]);
        auto& r1 = h.h1[q + 1];
        auto& r2 = h.h2[q + 1];
        for (int j = 0; j < 3; ++j) r1[j + 1] = k[1][j] * ex + k[0][j] * ey;
        for (int j = 0; j < 5; ++j) r2[j] = kxky[j] * ez;
    }
    return h;
}

std::vector<AmplitudeTerm> amplitude_terms(int m_s, const std::array<cd, 5>& row, double Phi) {
    std::vector<AmplitudeTerm> terms;
    terms.push_back({m_s, 0, TermKind::Cos, row[2], 0.0});
    for (int n = 1; n <= 2; ++n) {
        const cd up = row[2 + n], down = row[2 - n];
        terms.push_back({m_s, n, TermKind::Cos, up + down, -n * Phi});
        terms.push_back({m_s, n, TermKind::Sin, I * (up - down), -n * Phi});
    }
    return terms;
}

std::vector<AmplitudeTerm> amplitude_terms(const Transition& t, int m_s, const EmissionGeometry& geom, double beta) {
    if (m_s < -1 || m_s > 1) throw DomainError("amplitude_terms: m_s must lie in {-1,0,1}");
    const auto h = harmonic_table(geom.Theta, geom.Phi, geom.theta_k);
    const double w = geom.omega / c;
    const double s1 = t.omega_fi / c * w, s2 = beta * w * w;
    std::array<cd, 5> row{};
    for (int j = 0; j < 5; ++j) row[j] = t.xy * (s1 * h.h1[m_s + 1][j] + s2 * h.h2[m_s + 1][j]);
    return amplitude_terms(m_s, row, geom.Phi);
}

AmplitudeKernel::AmplitudeKernel(const PhotonQuantumNumbers& qn, double Theta, double Phi, const AmplitudeOptions& opt)
    : qn_(qn), opt_(opt), sin_theta_(std::sin(Theta)) {
    qn.validate();
    const auto h = harmonic_table(Theta, Phi, qn.theta_k);
    const auto d = specfun::wigner_d1_matrix(qn.theta_k);
    const int k0 = qn.m - 3;
    // e^{-i m phi_k} = e^{-i m Phi} e^{-i m psi}; the phi integral below runs
    // over phi = psi + Phi and carries e^{-i (m - q) Phi} itself, so each q
    // picks up e^{-i m Phi} e^{i (m - q) Phi} = e^{-i q Phi}.
    for (int q = -1; q <= 1; ++q) {
        const cd w = d[q + 1][qn.lambda + 1] * std::polar(1.0, -q * Phi);
        for (int part = 0; part < 2; ++part) {
            const auto& row = part == 0 ? h.h1[q + 1] : h.h2[q + 1];
            auto& g = part == 0 ? g1_ : g2_;
            for (const auto& term : amplitude_terms(q, row, Phi)) {
                // exp(+i B Z cos(phi - Phi)) is the table integral at Phi + pi
                const auto bt = term.kind == TermKind::Cos ? phi_integral_cos_terms(qn.m, q, term.n, term.f, Phi + pi)
                                                           : phi_integral_sin_terms(qn.m, q, term.n, term.f, Phi + pi);
                for (const auto& b : bt) {
                    // for n = 0 both halves land on the same order
                    g[static_cast<std::size_t>(b.order - k0)] += w * term.prefactor * b.coefficient;
                }
            }
        }
        cr1_ += d[q + 1][qn.lambda + 1] * 2.0 * pi * h.h1[q + 1][2];
        cr2_ += d[q + 1][qn.lambda + 1] * 2.0 * pi * h.h2[q + 1][2];
    }
}

double AmplitudeKernel::bessel_b(double omega) const {
    const double w = omega / c * sin_theta_;
    return opt_.bessel_argument == BesselArgument::Transverse ? w * std::sin(qn_.theta_k) : w;
}

cd AmplitudeKernel::twisted(const Transition& t, double omega, double D, double B, double beta) const {
    if (!(D > B)) return 0.0;
    const double w = omega / c;
    const double s1 = t.omega_fi / c * w, s2 = beta * w * w;
    const int k0 = qn_.m - 3;
    cd sum = 0.0;
    for (int i = 0; i < kOrders; ++i) {
        const int k = k0 + i;
        if (opt_.order_zero_only && k != 0) continue;
        const cd coeff = s1 * g1_[static_cast<std::size_t>(i)] + s2 * g2_[static_cast<std::size_t>(i)];
        if (coeff == 0.0) continue;
        sum += coeff * z_integral_gap(k, D, B);
    }
    return t.xy * sum;
}

cd AmplitudeKernel::cr(const Transition& t, double omega, double D, double B, double beta) const {
    const double w = omega / c;
    const double s1 = t.omega_fi / c * w, s2 = beta * w * w;
    return t.xy * (s1 * cr1_ + s2 * cr2_) * z_integral_gap(0, D, B);
}

namespace {

struct Kinematics {
    double D, B;
};

Kinematics kinematics(const AmplitudeKernel& kernel, const PhotonQuantumNumbers& qn, const EmissionGeometry& geom,
                      double Delta) {
    const double A = geom.omega / c * std::cos(geom.Theta) * std::cos(qn.theta_k);
    return {Delta - A, kernel.bessel_b(geom.omega)};
}

}  // namespace

cd assemble_m_fi(const Transition& t, const PhotonQuantumNumbers& qn, const EmissionGeometry& geom, double Delta,
                 double beta, const AmplitudeOptions& opt) {
    const AmplitudeKernel kernel(qn, geom.Theta, geom.Phi, opt);
    const auto kin = kinematics(kernel, qn, geom, Delta);
    return kernel.twisted(t, geom.omega, kin.D, kin.B, beta);
}

cd assemble_m_fi_cr(const Transition& t, const PhotonQuantumNumbers& qn, const EmissionGeometry& geom, double Delta,
                    double beta, const AmplitudeOptions& opt) {
    const AmplitudeKernel kernel(qn, geom.Theta, geom.Phi, opt);
    const auto kin = kinematics(kernel, qn, geom, Delta);
    return kernel.cr(t, geom.omega, kin.D, kin.B, beta);
}

}  // namespace twcr::amplitude
