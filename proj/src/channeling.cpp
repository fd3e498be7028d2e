#include "twcr/channeling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "twcr/constants.hpp"
#include "twcr/errors.hpp"

namespace twcr::channeling {

using constants::pi;

DoyleTurner doyle_turner_for(const std::string& element) {
    if (element == "Si") return {{2.1293, 2.5333, 0.8349, 0.3216}, {57.7748, 16.4756, 2.8796, 0.3860}};
    throw ConfigError("unsupported element '" + element + "'", "crystal.element");
}

void CrystalConfig::validate() const {
    if (form_factor == std::nullopt) doyle_turner_for(element);
    if (axis != "<100>") throw ConfigError("only the <100> axis is supported", "crystal.axis");
    if (!(lattice_constant > 0.0)) throw ConfigError("must be positive", "crystal.lattice_constant_angstrom");
    if (!(thermal_amplitude > 0.0)) throw ConfigError("must be positive", "crystal.thermal_amplitude_angstrom");
    if (basis_cutoff < 4) throw ConfigError("must be at least 4", "crystal.basis_cutoff");
    if (basis_cutoff > 16) throw ConfigError("must not exceed 16", "crystal.basis_cutoff");
}

DoyleTurner CrystalConfig::doyle_turner() const { return form_factor ? *form_factor : doyle_turner_for(element); }

double BeamConfig::gamma() const { return energy_mev * 1e6 / constants::electron_mc2_eV; }

double BeamConfig::beta() const {
    const double g = gamma();
    return std::sqrt((g - 1.0) * (g + 1.0)) / g;
}

void BeamConfig::validate() const {
    if (!(energy_mev * 1e6 > constants::electron_mc2_eV))
        throw ConfigError("must exceed the electron rest energy", "beam.energy_mev");
    if (!(incidence_rad >= 0.0) || !std::isfinite(incidence_rad))
        throw ConfigError("must be a finite non-negative angle", "beam.incidence_mrad");
}

FourierGrid continuum_potential_fourier(const CrystalConfig& config) {
    config.validate();
    const auto dt = config.doyle_turner();
    const double a = config.lattice_constant;
    const double a_ang = a / constants::angstrom;
    const double u1_ang = config.thermal_amplitude / constants::angstrom;
    // 2 pi hbar^2 / m0 in eV m^2
    const double scale = 2.0 * pi * constants::hbar_c_eVm * constants::hbar_c_eVm / constants::electron_mc2_eV;
    // cell (a/2)^2, one atom per a along each string
    const double volume = 0.25 * a * a * a;
    const int half = 2 * config.basis_cutoff;
    FourierGrid v(half);
    for (int m = -half; m <= half; ++m) {
        for (int n = -half; n <= half; ++n) {
            if ((m + n) % 2 != 0) continue;  // the two strings per cell cancel
            const double g = 4.0 * pi / a_ang * std::sqrt(static_cast<double>(m * m + n * n));
            const double s2 = g * g / (16.0 * pi * pi);
            double f = 0.0;
            for (int i = 0; i < 4; ++i) f += dt.a[i] * std::exp(-dt.b[i] * s2);
            const double dw = std::exp(-0.5 * g * g * u1_ang * u1_ang);
            v(m, n) = -scale * (f * constants::angstrom) * dw * 2.0 / volume;
        }
    }
    return v;
}

double potential_at(const FourierGrid& v, double lattice_constant, double x, double y) {
    const double gu = 4.0 * pi / lattice_constant;
    cd sum = 0.0;
    for (int m = -v.half(); m <= v.half(); ++m)
        for (int n = -v.half(); n <= v.half(); ++n)
            if (v(m, n) != 0.0) sum += v(m, n) * std::polar(1.0, -gu * (m * x + n * y));
    return sum.real();
}

double saddle_energy(const FourierGrid& v, double lattice_constant) {
    // midpoint of the nearest-neighbour strings at (0,0) and (a/4, a/4)
    return potential_at(v, lattice_constant, lattice_constant / 8.0, lattice_constant / 8.0);
}

double subband_k(const CrystalConfig& config, int i_n) { return pi * i_n / (5.0 * config.lattice_constant); }

cd BlochState::wavefunction(double x, double y) const {
    cd sum = 0.0;
    const int h = coefficients.half();
    for (int m = -h; m <= h; ++m)
        for (int n = -h; n <= h; ++n)
            sum += coefficients(m, n) * std::polar(1.0, -((k + g_unit * m) * x + (k + g_unit * n) * y));
    return sum;
}

namespace {

// Kinetic prefactor hbar^2 / (2 gamma m) in eV m^2.
double kinetic_scale(const BeamConfig& beam) {
    return constants::hbar_c_eVm * constants::hbar_c_eVm / (2.0 * beam.gamma() * constants::electron_mc2_eV);
}

}  // namespace

std::vector<BlochState> solve_bloch(const CrystalConfig& config, const BeamConfig& beam, int i_n, SolveStats* stats) {
    if (i_n < 0 || i_n >= kSubbands) throw DomainError(fmt::format("solve_bloch: sub-band {} out of range", i_n));
    config.validate();
    beam.validate();
    const FourierGrid v = continuum_potential_fourier(config);
    const int M = config.basis_cutoff;
    const int side = 2 * M + 1;
    const int N = side * side;
    const double gu = 4.0 * pi / config.lattice_constant;
    const double k = subband_k(config, i_n);
    const double t = kinetic_scale(beam);

    Eigen::MatrixXcd H(N, N);
    for (int a = 0; a < N; ++a) {
        const int ma = a / side - M, na = a % side - M;
        for (int b = 0; b < N; ++b) {
            const int mb = b / side - M, nb = b % side - M;
            H(a, b) = v(ma - mb, na - nb);
        }
        const double kx = k + gu * ma, ky = k + gu * na;
        H(a, a) += t * (kx * kx + ky * ky);
    }
    const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericError(
            fmt::format("Hermitian eigen-solve failed for sub-band {} (basis {}, cutoff {})", i_n, N, M));
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();
    if (stats) {
        stats->basis_size = N;
        stats->hermiticity_residual = herm;
        stats->orthonormality_residual =
            (vecs.adjoint() * vecs - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
    }

    std::vector<BlochState> out;
    out.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        BlochState s;
        s.band = j;
        s.subband = i_n;
        s.energy = solver.eigenvalues()(j);
        s.k = k;
        s.g_unit = gu;
        s.coefficients = FourierGrid(M);
        // fix the arbitrary eigenvector phase: largest component real positive
        Eigen::Index big = 0;
        vecs.col(j).cwiseAbs().maxCoeff(&big);
        const cd phase = std::abs(vecs(big, j)) > 0 ? std::conj(vecs(big, j)) / std::abs(vecs(big, j)) : cd{1.0};
        for (int a = 0; a < N; ++a) s.coefficients.data()[static_cast<std::size_t>(a)] = vecs(a, j) * phase;
        out.push_back(std::move(s));
    }
    return out;
}

BandStructure solve_band_structure(const CrystalConfig& config, const BeamConfig& beam, int extra_above) {
    BandStructure bs;
    bs.crystal = config;
    bs.beam = beam;
    const FourierGrid v = continuum_potential_fourier(config);
    bs.saddle = saddle_energy(v, config.lattice_constant);
    std::vector<std::vector<BlochState>> all(kSubbands);
    for (int i_n = 0; i_n < kSubbands; ++i_n) {
        SolveStats st;
        all[static_cast<std::size_t>(i_n)] = solve_bloch(config, beam, i_n, &st);
        bs.stats.basis_size = st.basis_size;
        bs.stats.hermiticity_residual = std::max(bs.stats.hermiticity_residual, st.hermiticity_residual);
        bs.stats.orthonormality_residual = std::max(bs.stats.orthonormality_residual, st.orthonormality_residual);
    }
    const int total = static_cast<int>(all[0].size());
    int bound = 0;
    while (bound < total) {
        double top = -1e300;
        for (const auto& sb : all) top = std::max(top, sb[static_cast<std::size_t>(bound)].energy);
        if (top >= bs.saddle) break;
        ++bound;
    }
    bs.total_bands = total;
    bs.bound_bands = bound;
    bs.retained_bands = std::min(total, bound + extra_above);
    bs.states.resize(kSubbands);
    for (int i_n = 0; i_n < kSubbands; ++i_n) {
        auto& src = all[static_cast<std::size_t>(i_n)];
        bs.states[static_cast<std::size_t>(i_n)].assign(std::make_move_iterator(src.begin()),
                                                        std::make_move_iterator(src.begin() + bs.retained_bands));
    }
    return bs;
}

double incidence_k(const CrystalConfig&, const BeamConfig& beam) {
    const double g = beam.gamma();
    const double p_perp = g * beam.beta() * constants::electron_mc2_eV * beam.incidence_rad / constants::hbar_c_eVm;
    return p_perp / std::sqrt(2.0);
}

std::vector<double> populations(const BandStructure& bands, const BeamConfig& beam) {
    const double step = pi / (5.0 * bands.crystal.lattice_constant);
    const double t = incidence_k(bands.crystal, beam) / step;
    // reduce into the first zone: reciprocal period along each axis is 20 steps
    const double g_shift = std::floor((t + 10.0) / 20.0);
    const double tr = t - 20.0 * g_shift;
    const int g = static_cast<int>(g_shift);
    const int gi = tr < 0.0 ? -g : g;  // time reversal maps -k onto +k with -g
    const double u = std::min(std::abs(tr), static_cast<double>(kSubbands - 1));
    const int lo = static_cast<int>(std::floor(u));
    const int hi = std::min(lo + 1, kSubbands - 1);
    const double w = u - lo;
    const int M = bands.crystal.basis_cutoff;

    std::vector<double> p(static_cast<std::size_t>(bands.retained_bands), 0.0);
    if (std::abs(gi) <= M) {
        for (int b = 0; b < bands.retained_bands; ++b) {
            const auto& s_lo = bands.states[static_cast<std::size_t>(lo)][static_cast<std::size_t>(b)];
            const auto& s_hi = bands.states[static_cast<std::size_t>(hi)][static_cast<std::size_t>(b)];
            p[static_cast<std::size_t>(b)] =
                (1.0 - w) * std::norm(s_lo.coefficients(gi, gi)) + w * std::norm(s_hi.coefficients(gi, gi));
        }
    }
    double total = 0.0;
    for (double x : p) total += x;
    if (!(total > 0.0))
        throw ConfigError("incident wave has no overlap with the retained bands", "beam.incidence_mrad");
    for (double& x : p) x /= total;
    return p;
}

cd dipole_xy(const BlochState& initial, const BlochState& final_state, double lattice_constant) {
    const int M = initial.coefficients.half();
    if (final_state.coefficients.half() != M) throw DomainError("dipole_xy: states come from different bases");
    const int side = 2 * M + 1;
    // W(d) = (-1)^d / d, W(0) = 0: the centred-cell moment of exp(i 2 pi d x / L)
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(side, side);
    for (int p = 0; p < side; ++p)
        for (int q = 0; q < side; ++q) {
            const int d = p - q;
            if (d != 0) W(p, q) = (d % 2 ? -1.0 : 1.0) / d;
        }
    Eigen::MatrixXcd Ci(side, side), Cf(side, side);
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n) {
            Ci(m + M, n + M) = initial.coefficients(m, n);
            Cf(m + M, n + M) = final_state.coefficients(m, n);
        }
    const Eigen::MatrixXcd X = W.cast<cd>() * Ci * W.transpose().cast<cd>();
    const cd sum = (Cf.conjugate().cwiseProduct(X)).sum();
    return -lattice_constant * lattice_constant / (16.0 * pi * pi) * sum;
}

std::vector<Transition> enumerate_transitions(const BandStructure& bands, const std::vector<double>& pops,
                                              const Floors& floors) {
    std::vector<Transition> all;
    const double a = bands.crystal.lattice_constant;
    for (int i_n = 0; i_n < static_cast<int>(bands.states.size()); ++i_n) {
        const auto& sb = bands.states[static_cast<std::size_t>(i_n)];
        for (const auto& si : sb) {
            const double P = pops[static_cast<std::size_t>(si.band)];
            if (P < floors.population) continue;
            for (const auto& sf : sb) {
                const double gap = si.energy - sf.energy;
                if (gap <= kDegenerateGap_eV) continue;
                Transition t;
                t.initial_band = si.band;
                t.final_band = sf.band;
                t.subband = i_n;
                t.initial_energy = si.energy;
                t.final_energy = sf.energy;
                t.omega_fi = gap / constants::hbar_eVs;
                t.xy = dipole_xy(si, sf, a);
                t.population = P;
                t.weight = P / kSubbands;
                all.push_back(t);
            }
        }
    }
    double biggest = 0.0;
    for (const auto& t : all) biggest = std::max(biggest, std::norm(t.xy));
    std::vector<Transition> kept;
    for (const auto& t : all)
        if (std::norm(t.xy) >= floors.dipole_relative * biggest) kept.push_back(t);
    if (kept.empty()) throw ConfigError("no radiative transition survives the population and dipole floors", "floors");
    return kept;
}

}  // namespace twcr::channeling
