#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "twcr/channeling.hpp"
#include "twcr/errors.hpp"
#include "twcr/oracle.hpp"

using namespace twcr;
using namespace twcr::channeling;

namespace {

const CrystalConfig kCrystal{};
const BeamConfig kBeam{};

const BandStructure& bands() {
    static const BandStructure b = solve_band_structure(kCrystal, kBeam);
    return b;
}

const std::vector<double>& pops() {
    static const std::vector<double> p = populations(bands(), kBeam);
    return p;
}

}  // namespace

TEST_CASE("beam kinematics at 10 MeV") {
    CHECK(kBeam.gamma() == doctest::Approx(10.0 / 0.51099895).epsilon(1e-12));
    CHECK(kBeam.beta() == doctest::Approx(std::sqrt(1.0 - 1.0 / (kBeam.gamma() * kBeam.gamma()))).epsilon(1e-15));
    BeamConfig slow;
    slow.energy_mev = 0.5;
    CHECK_THROWS_AS(slow.validate(), ConfigError);
}

TEST_CASE("crystal validation names the field") {
    CrystalConfig c;
    c.axis = "<110>";
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "crystal.axis");
    }
    c = {};
    c.basis_cutoff = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(doyle_turner_for("Xx"), ConfigError);
}

TEST_CASE("potential Fourier coefficients") {
    const auto v = continuum_potential_fourier(kCrystal);
    const int h = v.half();
    for (int m = -h; m <= h; ++m)
        for (int n = -h; n <= h; ++n) CHECK(std::abs(v(-m, -n) - std::conj(v(m, n))) == 0.0);

    // V_0 is the cell average of the reconstructed potential
    const double a = kCrystal.lattice_constant;
    const int grid = 64;
    double mean = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) mean += potential_at(v, a, 0.5 * a * i / grid, 0.5 * a * j / grid);
    mean /= grid * grid;
    CHECK(mean == doctest::Approx(v(0, 0).real()).epsilon(1e-10));

    // attractive at both strings of the cell, with the saddle in between
    const double on_string = potential_at(v, a, 0.0, 0.0);
    CHECK(on_string < 0.0);
    CHECK(potential_at(v, a, a / 4, a / 4) == doctest::Approx(on_string).epsilon(1e-10));
    CHECK(on_string < saddle_energy(v, a));
    CHECK(saddle_energy(v, a) < potential_at(v, a, a / 4, 0.0));
}

TEST_CASE("Bloch solver health") {
    SolveStats stats;
    const auto states = solve_bloch(kCrystal, kBeam, 3, &stats);
    CHECK(stats.hermiticity_residual == 0.0);
    CHECK(stats.orthonormality_residual < 1e-10);
    CHECK(stats.basis_size == 17 * 17);
    for (std::size_t i = 1; i < states.size(); ++i) CHECK(states[i - 1].energy <= states[i].energy);
    for (const auto& s : states) {
        double n = 0.0;
        for (const auto& c : s.coefficients.data()) n += std::norm(c);
        CHECK(std::abs(n - 1.0) < 1e-10);
    }
}

// Frozen from the convergence study: cutoff 8 -> 12 moves the ground level
// by 0.98 %.
TEST_CASE("ground level converges with the basis cutoff") {
    const double e8 = solve_bloch(kCrystal, kBeam, 0).front().energy;
    CrystalConfig fine = kCrystal;
    fine.basis_cutoff = 12;
    const double e12 = solve_bloch(fine, kBeam, 0).front().energy;
    CHECK(e8 == doctest::Approx(-56.950812).epsilon(2e-8));
    CHECK(e12 == doctest::Approx(-57.517033).epsilon(2e-8));
    CHECK(std::abs(e12 - e8) / std::abs(e12) < 0.01);
}

// Each coarse state keeps its index after refinement: it projects almost
// entirely onto the refined state with the same label, or onto that state's
// degenerate partners.
TEST_CASE("band ordering is stable under basis refinement") {
    CrystalConfig c10 = kCrystal;
    c10.basis_cutoff = 10;
    const auto coarse = solve_bloch(kCrystal, kBeam, 0);
    const auto fine = solve_bloch(c10, kBeam, 0);
    const int h = kCrystal.basis_cutoff;
    for (std::size_t b = 0; b < 16; ++b) {
        double weight = 0.0;
        for (std::size_t j = 0; j < 24; ++j) {
            if (std::abs(fine[j].energy - fine[b].energy) > 1e-3) continue;
            cd overlap = 0.0;
            for (int m = -h; m <= h; ++m)
                for (int n = -h; n <= h; ++n)
                    overlap += std::conj(fine[j].coefficients(m, n)) * coarse[b].coefficients(m, n);
            weight += std::norm(overlap);
        }
        CHECK(weight > 0.95);
    }
}

TEST_CASE("Bloch periodicity") {
    const auto& s = bands().states[7][2];
    const double a = kCrystal.lattice_constant;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 0.5 * a);
    for (int t = 0; t < 20; ++t) {
        const double x = u(rng), y = u(rng);
        const cd base = s.wavefunction(x, y);
        for (int j = -1; j <= 2; ++j)
            for (int k = -1; k <= 1; ++k) {
                const double dx = 0.5 * a * j, dy = 0.5 * a * k;
                const cd shifted = s.wavefunction(x + dx, y + dy);
                const cd expected = std::polar(1.0, -s.k * (dx + dy)) * base;
                CHECK(std::abs(shifted - expected) < 1e-10 * std::max(1.0, std::abs(base)));
            }
    }
}

TEST_CASE("bands vary continuously across sub-bands") {
    const auto& st = bands().states;
    for (int b = 0; b < bands().retained_bands; ++b) {
        double worst = 0.0;
        for (int i = 1; i < kSubbands; ++i) worst = std::max(worst, std::abs(st[i][b].energy - st[i - 1][b].energy));
        CHECK(worst < 1.0);  // eV; band groups are separated by ~10 eV
    }
}

TEST_CASE("band retention keeps bound bands plus three") {
    CHECK(bands().bound_bands > 0);
    CHECK(bands().retained_bands == bands().bound_bands + 3);
    for (const auto& row : bands().states) CHECK(static_cast<int>(row.size()) == bands().retained_bands);
}

TEST_CASE("populations") {
    const auto& p = pops();
    double sum = 0.0;
    for (double x : p) {
        CHECK(x >= 0.0);
        sum += x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);

    // at normal incidence the weight sits on states with the largest C^{0,0}
    const auto& row = bands().states[0];
    std::size_t top_c00 = 0, top_pop = 0;
    for (std::size_t b = 0; b < row.size(); ++b) {
        if (std::norm(row[b].coefficients(0, 0)) > std::norm(row[top_c00].coefficients(0, 0))) top_c00 = b;
        if (p[b] > p[top_pop]) top_pop = b;
    }
    CHECK(top_pop == top_c00);
}

TEST_CASE("dipole factor") {
    const auto& row = bands().states[4];
    // reversed order gives the complex conjugate
    for (int i = 0; i < 6; ++i)
        for (int f = 0; f < 6; ++f) {
            const cd fi = dipole_xy(row[i], row[f], kCrystal.lattice_constant);
            const cd ifw = dipole_xy(row[f], row[i], kCrystal.lattice_constant);
            const double a2 = kCrystal.lattice_constant * kCrystal.lattice_constant;
            CHECK(std::abs(std::abs(fi) - std::abs(ifw)) <= 1e-12 * std::abs(fi) + 1e-14 * a2);
        }
    // against the real-space quadrature for a pair with a sizeable value
    const cd xy = dipole_xy(bands().states[1][6], bands().states[1][2], kCrystal.lattice_constant);
    const cd ref = oracle::dipole_xy(bands().states[1][6], bands().states[1][2], kCrystal.lattice_constant);
    REQUIRE(std::abs(ref) > 0.0);
    CHECK(std::abs(xy - ref) < 1e-6 * std::abs(ref));
}

TEST_CASE("dipole factor vanishes when supports only share rows or columns") {
    // phi_i = C^{0,0}, phi_f = C^{0,1}: equal m index, so every term is excluded
    BlochState i, f;
    i.coefficients = FourierGrid(2);
    f.coefficients = FourierGrid(2);
    i.g_unit = f.g_unit = 4 * M_PI / kCrystal.lattice_constant;
    i.coefficients(0, 0) = 1.0;
    f.coefficients(0, 1) = 1.0;
    CHECK(dipole_xy(i, f, kCrystal.lattice_constant) == cd(0.0));
    f.coefficients(0, 1) = 0.0;
    f.coefficients(1, 1) = 1.0;
    CHECK(std::abs(dipole_xy(i, f, kCrystal.lattice_constant)) > 0.0);
}

TEST_CASE("transition floors") {
    const auto all = enumerate_transitions(bands(), pops(), {0.0, 0.0});
    std::size_t pairs = 0;
    for (int s = 0; s < kSubbands; ++s) {
        const auto& row = bands().states[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < row.size(); ++i)
            for (std::size_t f = 0; f < row.size(); ++f)
                if (row[i].energy - row[f].energy > kDegenerateGap_eV && pops()[i] > 0.0 &&
                    dipole_xy(row[i], row[f], kCrystal.lattice_constant) != cd(0.0))
                    ++pairs;
    }
    CHECK(all.size() == pairs);

    std::size_t previous = all.size();
    for (double floor : {1e-12, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2}) {
        const auto t = enumerate_transitions(bands(), pops(), {floor, floor});
        CHECK(t.size() <= previous);
        previous = t.size();
    }
    CHECK_THROWS_AS(enumerate_transitions(bands(), pops(), {1.0, 1.0}), ConfigError);

    for (const auto& t : enumerate_transitions(bands(), pops())) {
        CHECK(t.omega_fi > 0.0);
        CHECK(t.weight == doctest::Approx(t.population / kSubbands));
    }
}

// Bands 0 and 1 form a near-degenerate pair (the two strings of the cell) and
// band 1 is never populated at normal incidence, so no transition joins them.
// The lowest surviving lines end on the ground band and start from the first
// populated excited band.
TEST_CASE("the lowest populated bands are joined by a surviving transition") {
    const auto t = enumerate_transitions(bands(), pops());
    REQUIRE(!t.empty());
    int first_excited = -1;
    for (std::size_t b = 1; b < pops().size(); ++b)
        if (pops()[b] >= 1e-4) {
            first_excited = static_cast<int>(b);
            break;
        }
    REQUIRE(first_excited > 0);
    const bool found = std::any_of(
        t.begin(), t.end(), [&](const Transition& x) { return x.initial_band == first_excited && x.final_band == 0; });
    CHECK(found);
    CHECK(pops()[1] < 1e-20);
}

TEST_CASE("band structure cache round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "twcr_cache_test";
    fs::create_directories(dir);
    const std::string path = (dir / "bands.bin").string();
    fs::remove(path);

    bool hit = true;
    const auto first = solve_cached(kCrystal, kBeam, path, &hit);
    CHECK_FALSE(hit);
    const auto second = solve_cached(kCrystal, kBeam, path, &hit);
    CHECK(hit);
    REQUIRE(first.states.size() == second.states.size());
    for (std::size_t s = 0; s < first.states.size(); ++s)
        for (std::size_t b = 0; b < first.states[s].size(); ++b) {
            CHECK(first.states[s][b].energy == second.states[s][b].energy);
            CHECK(first.states[s][b].coefficients.data() == second.states[s][b].coefficients.data());
        }
    CHECK(first.saddle == second.saddle);

    CrystalConfig other = kCrystal;
    other.thermal_amplitude *= 1.01;
    CHECK(solver_key(other, kBeam) != solver_key(kCrystal, kBeam));
    CHECK_FALSE(load_band_structure(path, solver_key(other, kBeam)).has_value());

    // a truncated file is ignored rather than trusted
    fs::resize_file(path, fs::file_size(path) / 2);
    CHECK_FALSE(load_band_structure(path, solver_key(kCrystal, kBeam)).has_value());
    fs::remove_all(dir);
}
