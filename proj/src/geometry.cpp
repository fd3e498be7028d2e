#include "twcr/geometry.hpp"

#include <cmath>

#include "twcr/constants.hpp"
#include "twcr/errors.hpp"
#include "twcr/specfun.hpp"

namespace twcr::geometry {

using constants::c;

double WaveVectorCrystal::norm() const { return std::sqrt(kx * kx + ky * ky + kz * kz); }

double EmissionGeometry::kappa_perp() const { return omega / c * std::sin(theta_k); }
double EmissionGeometry::kappa_z() const { return omega / c * std::cos(theta_k); }

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat3 transpose(const Mat3& a) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
    return r;
}

double determinant(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 rot_y(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

Mat3 rot_z(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 rotation_matrix(double Theta, double Phi) {
    if (Theta == 0.0) return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    return multiply(multiply(rot_z(Phi), rot_y(Theta)), rot_z(-Phi));
}

Mat3 basis_rotation(double Theta, double Phi) { return multiply(rot_z(Phi), rot_y(Theta)); }

CrystalVec apply(const Mat3& r, const PhotonVec& v) {
    CrystalVec out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += r[i][j] * v[j];
    return out;
}

std::array<double, 3> apply(const Mat3& r, const std::array<double, 3>& v) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += r[i][j] * v[j];
    return out;
}

PhotonVec spin_basis(int m_s) {
    const double h = 1.0 / std::sqrt(2.0);
    const cd i{0.0, 1.0};
    PhotonVec v;
    switch (m_s) {
        case 0: v[2] = 1.0; break;
        case 1:
            v[0] = -h;
            v[1] = -h * i;
            break;
        case -1:
            v[0] = h;
            v[1] = -h * i;
            break;
        default: throw DomainError("spin_basis: m_s must lie in {-1,0,1}");
    }
    return v;
}

namespace {

template <Frame F>
ComplexVec3<F> lift(const PhotonVec& p) {
    ComplexVec3<F> out;
    out.v = p.v;
    return out;
}

// sum_{m'} e^{-i m' phase} d_{m' q}(angle) chi_{m'} in whichever frame the
// caller interprets the components.
PhotonVec rotated_spin(int q, double angle, double phase) {
    if (q < -1 || q > 1) throw DomainError("polarization: index must lie in {-1,0,1}");
    const auto d = specfun::wigner_d1_matrix(angle);
    PhotonVec out;
    for (int mp = -1; mp <= 1; ++mp) {
        const cd w = std::polar(d[mp + 1][q + 1], -mp * phase);
        out += w * spin_basis(mp);
    }
    return out;
}

void check_helicity(int lambda) {
    if (lambda != 1 && lambda != -1) throw DomainError("polarization: helicity must be +1 or -1");
}

}  // namespace

PhotonVec polarization_photon(int lambda, double theta_k, double phi_k) {
    check_helicity(lambda);
    return rotated_spin(lambda, theta_k, phi_k);
}

CrystalVec polarization_cr_basis(int q, double Theta, double Phi) {
    // The spherical components are already crystal-frame components here:
    // the sum is R_z(Phi) R_y(Theta) chi_q evaluated in crystal axes.
    return lift<Frame::Crystal>(rotated_spin(q, Theta, Phi));
}

CrystalVec polarization_cr(int lambda, double Theta, double Phi) {
    check_helicity(lambda);
    return polarization_cr_basis(lambda, Theta, Phi);
}

CrystalVec polarization_twcr(int lambda, double theta_k, double phi_k, double Theta, double Phi) {
    check_helicity(lambda);
    const auto d = specfun::wigner_d1_matrix(theta_k);
    CrystalVec out;
    for (int q = -1; q <= 1; ++q) {
        const cd w = std::polar(d[q + 1][lambda + 1], -q * (phi_k - Phi));
        out += w * polarization_cr_basis(q, Theta, Phi);
    }
    return out;
}

WaveVectorCrystal wavevector_crystal(const EmissionGeometry& g) {
    const double kp = g.kappa_perp();
    const auto k = apply(rotation_matrix(g.Theta, g.Phi),
                         std::array<double, 3>{kp * std::cos(g.phi_k), kp * std::sin(g.phi_k), g.kappa_z()});
    return {k[0], k[1], k[2]};
}

WaveVectorCrystal wavevector_crystal_explicit(const EmissionGeometry& g) {
    const double kp = g.kappa_perp(), kz = g.kappa_z();
    const double cT = std::cos(g.Theta), sT = std::sin(g.Theta);
    const double cP = std::cos(g.Phi), sP = std::sin(g.Phi);
    const double cp = std::cos(g.phi_k), sp = std::sin(g.phi_k);
    WaveVectorCrystal k;
    k.kx = kz * sT * cP + kp * (cT - 1.0) * cP * sp * sP + kp * cp * (cT * cP * cP + sP * sP);
    k.ky = kz * sT * sP + kp * (cT - 1.0) * cP * cp * sP + kp * sp * (cT * sP * sP + cP * cP);
    k.kz = kz * cT - kp * std::cos(g.phi_k - g.Phi) * sT;
    return k;
}

}  // namespace twcr::geometry
