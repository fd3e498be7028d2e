#pragma once

#include <array>
#include <complex>

namespace twcr::geometry {

using cd = std::complex<double>;
using Mat3 = std::array<std::array<double, 3>, 3>;

enum class Frame { Photon, Crystal };

// Complex 3-vector tagged with the frame it is expressed in. Vectors of
// different frames do not mix; the only way from Photon to Crystal is
// through a Rotation.
template <Frame F>
struct ComplexVec3 {
    std::array<cd, 3> v{};

    cd& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    const cd& operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    ComplexVec3& operator+=(const ComplexVec3& o) {
        for (int i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    friend ComplexVec3 operator+(ComplexVec3 a, const ComplexVec3& b) { return a += b; }
    friend ComplexVec3 operator*(cd s, ComplexVec3 a) {
        for (auto& x : a.v) x *= s;
        return a;
    }
};

using PhotonVec = ComplexVec3<Frame::Photon>;
using CrystalVec = ComplexVec3<Frame::Crystal>;

// Hermitian inner product <a, b> = sum conj(a_i) b_i.
template <Frame F>
cd inner(const ComplexVec3<F>& a, const ComplexVec3<F>& b) {
    cd s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <Frame F>
double norm(const ComplexVec3<F>& a) {
    return std::sqrt(std::real(inner(a, a)));
}

// Photon wave vector in the crystal frame, rad/m.
struct WaveVectorCrystal {
    double kx = 0.0, ky = 0.0, kz = 0.0;
    double norm() const;
};

struct EmissionGeometry {
    double Theta = 0.0;    // photon axis polar angle w.r.t. crystal axis
    double Phi = 0.0;      // photon axis azimuth
    double theta_k = 0.0;  // cone opening angle of the twisted photon
    double phi_k = 0.0;    // azimuth on the cone
    double omega = 0.0;    // rad/s

    double kappa_perp() const;  // (omega/c) sin theta_k
    double kappa_z() const;     // (omega/c) cos theta_k
};

Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

// Photon frame -> crystal frame: R_z(Phi) R_y(Theta) R_z(-Phi). Third column
// is the photon axis (sinT cosP, sinT sinP, cosT).
Mat3 rotation_matrix(double Theta, double Phi);

// R_z(Phi) R_y(Theta): the frame in which the CR polarisation basis is
// diagonal (its columns carry the chi basis to eps_CR up to phases).
Mat3 basis_rotation(double Theta, double Phi);

CrystalVec apply(const Mat3& r, const PhotonVec& v);
std::array<double, 3> apply(const Mat3& r, const std::array<double, 3>& v);

// Spherical spin basis chi_{m_s}, m_s in {-1, 0, 1}; chi_0 = z,
// chi_{+-1} = -+(1, +-i, 0)/sqrt2.
PhotonVec spin_basis(int m_s);

// Twisted-photon polarisation on its own cone, photon frame:
// sum_q e^{-i q phi_k} d_{q Lambda}(theta_k) chi_q.
PhotonVec polarization_photon(int lambda, double theta_k, double phi_k);

// CR polarisation basis in the crystal frame,
// sum_{m'} e^{-i m' Phi} d_{m' q}(Theta) chi_{m'}; q in {-1,0,1}.
CrystalVec polarization_cr_basis(int q, double Theta, double Phi);

// Same, restricted to helicity Lambda = +-1.
CrystalVec polarization_cr(int lambda, double Theta, double Phi);

// Twisted-photon polarisation in the crystal frame. The cone azimuth is
// measured from the photon-axis azimuth: sum_q e^{-i q (phi_k - Phi)}
// d_{q Lambda}(theta_k) eps^q_CR, which equals
// rotation_matrix(Theta, Phi) * polarization_photon(Lambda, theta_k, phi_k).
CrystalVec polarization_twcr(int lambda, double theta_k, double phi_k, double Theta, double Phi);

// rotation_matrix(Theta, Phi) * (kappa cos phi_k, kappa sin phi_k, kappa_z).
WaveVectorCrystal wavevector_crystal(const EmissionGeometry& g);

// Component formulas written out in closed form (cross-check only).
WaveVectorCrystal wavevector_crystal_explicit(const EmissionGeometry& g);

}  // namespace twcr::geometry
