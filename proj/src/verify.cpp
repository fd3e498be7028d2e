#include "twcr/verify.hpp"

#include <fmt/format.h>

#include "twcr/matrixelement.hpp"

namespace twcr::verify {

std::vector<checks::CheckResult> run(const config::RunConfig& cfg, std::ostream& out) {
    const int n = cfg.oracle.samples;
    const auto seed = cfg.oracle.seed;
    std::vector<checks::CheckResult> results;
    auto add = [&](checks::CheckResult r) {
        out << checks::format_line(r) << '\n' << std::flush;
        results.push_back(std::move(r));
    };

    checks::ZClosedForm z;
    if (cfg.oracle.inject_fault == "z_integral_sign")
        z = [](int m, double D, double B) { return -amplitude::z_integral_gap(m, D, B); };

    add(checks::check_bessel(10 * n, seed));
    add(checks::check_bessel_recurrence(10 * n, seed + 1));
    add(checks::check_wigner(n, seed + 2));
    add(checks::check_z_integral(n, seed + 3, z));
    add(checks::check_phi_integrals(2 * n, seed + 4));
    for (auto& r : checks::report_phi_readings(2 * n, seed + 4)) add(std::move(r));
    add(checks::check_wavevector(10 * n, seed + 5));
    add(checks::check_wavevector_components(n, seed + 6));
    add(checks::check_polarization(2 * n, seed + 7));
    add(checks::check_transversality(n, seed + 8));
    add(checks::check_amplitude_route(n, seed + 9));
    add(checks::check_tam_reflection(n, seed + 10));

    const auto bands = channeling::solve_band_structure(cfg.crystal, cfg.beam);
    add(checks::check_solver_health(bands));
    add(checks::check_ground_convergence(cfg.crystal, cfg.beam, cfg.crystal.basis_cutoff + 4));
    add(checks::check_dipole(bands, 6));

    const bool ok = all_passed(results);
    out << fmt::format("verify: {}\n", ok ? "all checks passed" : "FAILED");
    return results;
}

bool all_passed(const std::vector<checks::CheckResult>& results) {
    for (const auto& r : results)
        if (!r.informational && !r.passed) return false;
    return true;
}

}  // namespace twcr::verify
