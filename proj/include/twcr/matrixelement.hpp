#pragma once

#include <array>
#include <complex>
#include <vector>

#include "twcr/channeling.hpp"
#include "twcr/geometry.hpp"

namespace twcr::amplitude {

using cd = std::complex<double>;
using channeling::Transition;
using geometry::CrystalVec;
using geometry::EmissionGeometry;
using geometry::WaveVectorCrystal;

struct PhotonQuantumNumbers {
    int m = 0;             // total angular momentum projection on the photon axis
    int lambda = 1;        // helicity, +-1
    double theta_k = 0.0;  // cone opening angle, rad

    void validate() const;  // |m| <= kMaxTam, lambda = +-1, theta_k in [0, pi/2)
};

inline constexpr int kMaxTam = 12;

// ---- Z integral --------------------------------------------------------

struct ZIntegralParams {
    int m_o = 0;
    double Delta = 0.0;  // rad/m
    double A = 0.0;      // (omega/c) cos Theta cos theta_k
    double B = 0.0;      // (omega/c) sin Theta sin theta_k, >= 0
};

// int_0^inf e^{i Z (Delta - A)} J_{m_o}(B Z) dZ in closed form:
// (i/s) (i B / (s + D))^{|m_o|} (-1)^{m_o for m_o < 0}, D = Delta - A,
// s = sqrt(D^2 - B^2). Zero when D <= B.
cd z_integral(const ZIntegralParams& p);

// Same with D = Delta - A supplied directly.
cd z_integral_gap(int m_o, double D, double B);

// ---- phi integrals -----------------------------------------------------
//
// Exact values of
//   int_0^{2pi} cos(f + n phi) e^{-i (m - m_s) phi - i A_z cos(phi - Phi)} dphi
// and the sin counterpart, written as two Bessel terms so that the caller
// may substitute any other function of the order for J.

struct BesselTerm {
    int order = 0;
    cd coefficient;
};

std::array<BesselTerm, 2> phi_integral_cos_terms(int m, int m_s, int n, double f, double Phi);
std::array<BesselTerm, 2> phi_integral_sin_terms(int m, int m_s, int n, double f, double Phi);

cd phi_integral_cos(int m, int m_s, int n, double f, double A_z, double Phi);
cd phi_integral_sin(int m, int m_s, int n, double f, double A_z, double Phi);

// The table-integral expressions exactly as they are usually quoted (with
// the i^{m_s - n} and i^{1 - m_s - n} prefactors). They differ from the exact
// values above by a factor i^{m - 2n}, with one more sign flip in the sin form
// when m_s = 0; kept for the verification report.
cd phi_integral_cos_quoted(int m, int m_s, int n, double f, double A_z, double Phi);
cd phi_integral_sin_quoted(int m, int m_s, int n, double f, double A_z, double Phi);

// ---- dipole current and harmonic expansion ------------------------------

// alpha_fi = ((Omega/c) K_Y, (Omega/c) K_X, beta K_X K_Y) <XY>_fi.
CrystalVec alpha_fi(const Transition& t, const WaveVectorCrystal& K, double beta);

enum class TermKind { Cos, Sin };

// prefactor * cos|sin(f + n phi_k) inside the phi_k integral for spin
// component m_s.
struct AmplitudeTerm {
    int m_s = 0;
    int n = 0;
    TermKind kind = TermKind::Cos;
    cd prefactor;
    double f = 0.0;
};

// Harmonics h[q+1][j+2] of conj(eps^q_CR) . a(psi), psi = phi_k - Phi, on
// the unit cone (omega/c = 1), split into the part proportional to
// Omega omega / c^2 (transverse components) and to beta omega^2 / c^2
// (longitudinal component):
//   alpha . conj(eps^q) = <XY> sum_j (s1 h1[q][j] + s2 h2[q][j]) e^{i j psi}.
struct HarmonicTable {
    std::array<std::array<cd, 5>, 3> h1{};
    std::array<std::array<cd, 5>, 3> h2{};
};

HarmonicTable harmonic_table(double Theta, double Phi, double theta_k);

// Cos/sin terms for one spin component with the given harmonic row.
std::vector<AmplitudeTerm> amplitude_terms(int m_s, const std::array<cd, 5>& row, double Phi);

// Expansion of alpha_fi(phi_k) . conj(eps^{m_s}_CR) for one transition and
// frequency.
std::vector<AmplitudeTerm> amplitude_terms(const Transition& t, int m_s, const EmissionGeometry& geom, double beta);

// ---- assembled amplitude ----------------------------------------------

enum class BesselArgument {
    Transverse,  // A_z = kappa_perp Z sin Theta
    Full,        // A_z = (omega/c) Z sin Theta
};

struct AmplitudeOptions {
    BesselArgument bessel_argument = BesselArgument::Transverse;
    bool order_zero_only = false;  // keep only the m_o = 0 Bessel channel
};

// Per-direction precomputation. For a fixed photon direction (Theta, Phi)
// and quantum numbers the amplitude is
//   <XY> sum_k intJ_k(D, B) (s1 G1_k + s2 G2_k)
// with k = m - m_s - n running over m-3..m+3, so only the Z integrals depend
// on the transition.
class AmplitudeKernel {
  public:
    AmplitudeKernel(const PhotonQuantumNumbers& qn, double Theta, double Phi, const AmplitudeOptions& opt = {});

    // Twisted-photon amplitude for transition frequency Omega (rad/s),
    // photon frequency omega, and Z-integral parameters D = Delta - A, B.
    cd twisted(const Transition& t, double omega, double D, double B, double beta) const;

    // Ordinary CR amplitude on the same kinematics: phi_k integral replaced
    // by 2 pi and only m_o = 0 kept.
    cd cr(const Transition& t, double omega, double D, double B, double beta) const;

    // B for the configured Bessel-argument reading.
    double bessel_b(double omega) const;

    static constexpr int kOrders = 7;

  private:
    PhotonQuantumNumbers qn_;
    AmplitudeOptions opt_;
    double sin_theta_ = 0.0;
    std::array<cd, kOrders> g1_{}, g2_{};  // indexed by k - (m - 3)
    cd cr1_, cr2_;
};

// Reduced matrix element at longitudinal transfer Delta (rad/m) and photon
// frequency geom.omega. The constant i^{-m}(c hbar/2) sqrt(alpha sin theta_k
// / (pi L R)) is left out; it cancels in normalised distributions.
cd assemble_m_fi(const Transition& t, const PhotonQuantumNumbers& qn, const EmissionGeometry& geom, double Delta,
                 double beta, const AmplitudeOptions& opt = {});

// Ordinary-CR counterpart of assemble_m_fi.
cd assemble_m_fi_cr(const Transition& t, const PhotonQuantumNumbers& qn, const EmissionGeometry& geom, double Delta,
                    double beta, const AmplitudeOptions& opt = {});

}  // namespace twcr::amplitude
