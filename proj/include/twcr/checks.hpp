#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "twcr/channeling.hpp"

namespace twcr::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    bool informational = false;  // reported but never gating
    double seconds = 0.0;
};

// Closed form under test for the Z integral, (m_o, D, B) -> value.
using ZClosedForm = std::function<std::complex<double>(int, double, double)>;

CheckResult check_bessel(int samples, std::uint64_t seed);
CheckResult check_bessel_recurrence(int samples, std::uint64_t seed);
CheckResult check_wigner(int samples, std::uint64_t seed);
CheckResult check_z_integral(int samples, std::uint64_t seed, const ZClosedForm& closed_form = {});
CheckResult check_phi_integrals(int samples, std::uint64_t seed);
// Residuals of the quoted table-integral forms under both exponent readings.
std::vector<CheckResult> report_phi_readings(int samples, std::uint64_t seed);
CheckResult check_wavevector(int samples, std::uint64_t seed);
CheckResult check_wavevector_components(int samples, std::uint64_t seed);
CheckResult check_polarization(int samples, std::uint64_t seed);
CheckResult check_transversality(int samples, std::uint64_t seed);
CheckResult check_amplitude_route(int samples, std::uint64_t seed);
CheckResult check_tam_reflection(int samples, std::uint64_t seed);
CheckResult check_solver_health(const channeling::BandStructure& bands);
CheckResult check_ground_convergence(const channeling::CrystalConfig& crystal, const channeling::BeamConfig& beam,
                                     int refined_cutoff);
CheckResult check_dipole(const channeling::BandStructure& bands, int pairs);

std::string format_line(const CheckResult& r);

}  // namespace twcr::checks
