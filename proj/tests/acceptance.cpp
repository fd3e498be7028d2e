// Acceptance suite. Prints one PASS/FAIL line per criterion; the exit status
// is nonzero when any selected criterion fails.
//
//   acceptance            all criteria
//   acceptance 3 5        only criteria 3 and 5

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "twcr/checks.hpp"
#include "twcr/config.hpp"
#include "twcr/constants.hpp"
#include "twcr/distribution.hpp"
#include "twcr/pipeline.hpp"

namespace fs = std::filesystem;
using namespace twcr;

namespace {

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
    bool passed = false;
    std::string summary;
};

double deg(double d) { return d * constants::pi / 180.0; }

// Band structure and transitions of the default 10 MeV Si <100> setup,
// shared by the map-level criteria.
const pipeline::SolveResult& default_solve() {
    static const pipeline::SolveResult result = [] {
        config::RunConfig cfg;
        cfg.output.cache = false;
        return pipeline::solve(cfg);
    }();
    return result;
}

distribution::AngularMap default_map(int m, double theta_k_deg, bool cr_limit = false) {
    config::RunConfig cfg;
    auto opt = config::map_options(cfg);
    opt.emission.cr_limit = cr_limit;
    const auto& s = default_solve();
    return distribution::angular_map(s.transitions, cfg.beam.beta(), m, deg(theta_k_deg), cfg.grid, opt);
}

std::string describe(const checks::CheckResult& r) {
    return fmt::format("{} {:.2e} (< {:.0e}, {:.1f} s)", r.name, r.measured, r.tolerance, r.seconds);
}

Outcome criterion_integrals() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto z = checks::check_z_integral(100, kSeed);
    const auto phi = checks::check_phi_integrals(200, kSeed);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {z.passed && phi.passed && seconds < 30.0,
            fmt::format("{}; {}; total {:.1f} s (< 30 s)", describe(z), describe(phi), seconds)};
}

Outcome criterion_kinematics() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto k = checks::check_wavevector(1000, kSeed);
    const auto eps = checks::check_polarization(200, kSeed);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {k.passed && eps.passed && seconds < 5.0,
            fmt::format("{}; {}; total {:.2f} s (< 5 s)", describe(k), describe(eps), seconds)};
}

Outcome criterion_tam_reflection() {
    const auto amp = checks::check_tam_reflection(200, kSeed);
    const auto plus = default_map(3, 30.0);
    const auto minus = default_map(-3, 30.0);
    const double dev = distribution::max_relative_deviation(plus, minus);
    return {amp.passed && dev < 0.05,
            fmt::format("amplitude {:.2e} (< 1e-10); maps m = +-3 at 30 deg max relative deviation {:.2e} (< 5e-2)",
                        amp.measured, dev)};
}

// A twisted photon with a vanishing cone angle carries helicity Lambda and
// TAM m = Lambda, so the comparison with the plane-wave pipeline is made for
// m = +-1; other m fall off as powers of the cone angle.
Outcome criterion_cr_limit() {
    double worst = 1.0;
    std::string parts;
    for (int m : {1, -1}) {
        const double r = distribution::correlation(default_map(m, 0.1), default_map(m, 0.1, true));
        worst = std::min(worst, r);
        parts += fmt::format("m = {:+d}: {:.6f}; ", m, r);
    }
    return {worst > 0.99, parts + "correlation with the CR map at theta_k = 0.1 deg (> 0.99)"};
}

Outcome criterion_two_peaks() {
    bool ok = true;
    std::string parts;
    for (int m : {3, -3}) {
        const auto map = default_map(m, 85.0);
        const auto peaks = distribution::local_maxima(map);
        bool near = peaks.size() == 2;
        std::string where;
        for (const auto& p : peaks) {
            where += fmt::format(" ({:.2f}, {:.1f})", p.theta_deg, p.phi_deg);
            const double d90 = std::abs(std::remainder(p.phi_deg - 90.0, 360.0));
            const double d270 = std::abs(std::remainder(p.phi_deg - 270.0, 360.0));
            near = near && std::min(d90, d270) <= 10.0;
        }
        if (peaks.size() == 2) {
            // one peak near each of the two targets
            const double a = peaks[0].phi_deg, b = peaks[1].phi_deg;
            near = near && std::abs(std::abs(std::remainder(a - b, 360.0)) - 180.0) <= 20.0;
        }
        ok = ok && near;
        parts += fmt::format("m = {:+d}: {} maxima at (Theta, Phi) deg{}; ", m, peaks.size(), where);
    }
    return {ok, parts + "want exactly two, within 10 deg of Phi = 90 and 270"};
}

Outcome criterion_anisotropy() {
    std::vector<double> a;
    for (int m : {3, 6, 9}) a.push_back(distribution::phi_anisotropy(default_map(m, 30.0)));
    const bool decreasing = a[0] > a[1] && a[1] > a[2];
    return {decreasing, fmt::format("std/mean over Phi on the peak ring for m = 3, 6, 9 at 30 deg: {:.4e}, {:.4e}, "
                                    "{:.4e} (want strictly decreasing)",
                                    a[0], a[1], a[2])};
}

Outcome criterion_solver() {
    const auto t0 = std::chrono::steady_clock::now();
    config::RunConfig cfg;
    const auto bands = channeling::solve_band_structure(cfg.crystal, cfg.beam);
    const auto health = checks::check_solver_health(bands);
    const auto conv = checks::check_ground_convergence(cfg.crystal, cfg.beam, 12);
    const auto dip = checks::check_dipole(bands, 6);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {health.passed && conv.passed && dip.passed && seconds < 60.0,
            fmt::format("orthonormality {:.2e} (< 1e-10); ground level change {:.3e} (< 1e-2); dipole vs "
                        "real-space quadrature {:.2e} (< 1e-6); {:.1f} s (< 60 s)",
                        health.measured, conv.measured, dip.measured, seconds)};
}

std::map<std::string, std::string> read_csvs(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

Outcome criterion_determinism() {
    const fs::path root = fs::temp_directory_path() / fmt::format("twcr_acceptance_{}", ::getpid());
    std::vector<std::map<std::string, std::string>> runs;
    for (int workers : {1, 1, 3}) {
        config::RunConfig cfg;
        cfg.photon.m = {-3, 3};
        cfg.photon.theta_k_deg = {10.0, 20.0, 30.0};
        cfg.output.directory = (root / fmt::format("run{}", runs.size())).string();
        cfg.output.cache = false;
        cfg.workers = workers;
        std::ostringstream log;
        pipeline::run(cfg, log);
        runs.push_back(read_csvs(cfg.output.directory));
    }
    fs::remove_all(root);
    const bool same = runs[0].size() == 6 && runs[0] == runs[1];
    const bool across_workers = runs[0] == runs[2];
    return {same && across_workers,
            fmt::format("{} CSV files; repeated run byte-identical: {}; 3 workers vs 1 byte-identical: {}",
                        runs[0].size(), same ? "yes" : "no", across_workers ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"closed-form integral oracles", criterion_integrals},
        {"kinematics and polarization", criterion_kinematics},
        {"TAM reflection", criterion_tam_reflection},
        {"CR limit at small cone angle", criterion_cr_limit},
        {"two peaks at theta_k = 85 deg", criterion_two_peaks},
        {"anisotropy falls with m", criterion_anisotropy},
        {"solver health", criterion_solver},
        {"determinism", criterion_determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion " << argv[i] << "\n";
            return 2;
        }
        selected.insert(n);
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.insert(n);

    bool all = true;
    for (int n : selected) {
        const auto& [name, fn] = criteria[static_cast<std::size_t>(n - 1)];
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.passed;
        std::cout << fmt::format("criterion {} [{}] {}: {}", n, o.passed ? "PASS" : "FAIL", name, o.summary)
                  << std::endl;
    }
    return all ? 0 : 1;
}
