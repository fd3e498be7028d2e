#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twcr::channeling {

using cd = std::complex<double>;

// Number of quasimomentum samples per band.
inline constexpr int kSubbands = 10;

// Pairs closer than this in energy are treated as degenerate, not radiative.
inline constexpr double kDegenerateGap_eV = 1e-9;

// Electron scattering factor f(s) = sum a_i exp(-b_i s^2), s = q / 4pi.
// a in Angstrom, b in Angstrom^2.
struct DoyleTurner {
    std::array<double, 4> a{};
    std::array<double, 4> b{};
};

// Tabulated Doyle-Turner parameters; throws ConfigError for unknown elements.
DoyleTurner doyle_turner_for(const std::string& element);

struct CrystalConfig {
    std::string element = "Si";
    std::string axis = "<100>";
    double lattice_constant = 5.431e-10;     // m
    double thermal_amplitude = 0.075e-10;    // m, 1D rms
    int basis_cutoff = 8;                    // plane waves with |m|,|n| <= cutoff
    std::optional<DoyleTurner> form_factor;  // overrides the element table

    void validate() const;  // throws ConfigError with a field path
    DoyleTurner doyle_turner() const;
};

struct BeamConfig {
    double energy_mev = 10.0;    // total energy
    double incidence_rad = 0.0;  // angle to the crystal axis

    double gamma() const;
    double beta() const;
    void validate() const;
};

// Square grid of complex values indexed by (m, n) in [-half, half]^2.
class FourierGrid {
  public:
    FourierGrid() = default;
    explicit FourierGrid(int half) : half_(half), data_(static_cast<std::size_t>((2 * half + 1) * (2 * half + 1))) {}

    int half() const { return half_; }
    int side() const { return 2 * half_ + 1; }
    std::size_t size() const { return data_.size(); }
    std::size_t index(int m, int n) const { return static_cast<std::size_t>((m + half_) * side() + (n + half_)); }
    cd& operator()(int m, int n) { return data_[index(m, n)]; }
    const cd& operator()(int m, int n) const { return data_[index(m, n)]; }
    std::vector<cd>& data() { return data_; }
    const std::vector<cd>& data() const { return data_; }

  private:
    int half_ = 0;
    std::vector<cd> data_;
};

// Fourier coefficients V_g (eV) of the thermally smeared continuum potential,
// g = (4 pi / a)(m, n), on |m|,|n| <= 2 * basis_cutoff (enough for every
// difference g - g' in the Hamiltonian). Real space: V(r) = sum V_g e^{-i g r}.
FourierGrid continuum_potential_fourier(const CrystalConfig& config);

// Real-space potential (eV) reconstructed from the Fourier grid.
double potential_at(const FourierGrid& v, double lattice_constant, double x, double y);

// Potential at the saddle between neighbouring strings, the barrier that
// separates bound from free transverse motion.
double saddle_energy(const FourierGrid& v, double lattice_constant);

// Quasimomentum of sub-band i_n, per Cartesian component (rad/m).
double subband_k(const CrystalConfig& config, int i_n);

struct BlochState {
    int band = 0;
    int subband = 0;
    double energy = 0.0;       // eV
    double k = 0.0;            // quasimomentum component along x and y, rad/m
    double g_unit = 0.0;       // 4 pi / a_p, rad/m
    FourierGrid coefficients;  // C^{m,n}

    // phi(x, y) = sum C^{m,n} exp(-i (k + g) . r)
    cd wavefunction(double x, double y) const;
};

struct SolveStats {
    int basis_size = 0;
    double hermiticity_residual = 0.0;     // max |H - H^dagger|
    double orthonormality_residual = 0.0;  // max |V^dagger V - I|
};

// Full spectrum for one sub-band, ascending in energy.
std::vector<BlochState> solve_bloch(const CrystalConfig& config, const BeamConfig& beam, int i_n,
                                    SolveStats* stats = nullptr);

struct BandStructure {
    CrystalConfig crystal;
    BeamConfig beam;
    // states[i_n][band], restricted to retained bands
    std::vector<std::vector<BlochState>> states;
    double saddle = 0.0;  // eV
    int bound_bands = 0;
    int retained_bands = 0;
    int total_bands = 0;
    SolveStats stats;  // worst case over sub-bands
};

// Solves every sub-band and applies band retention: bands whose maximum
// energy lies below the saddle, plus `extra_above` more.
BandStructure solve_band_structure(const CrystalConfig& config, const BeamConfig& beam, int extra_above = 3);

// Transverse momentum (rad/m, per Cartesian component) of an electron
// entering at the beam incidence angle along the (1,1) diagonal.
double incidence_k(const CrystalConfig& config, const BeamConfig& beam);

// Populations of retained bands, indexed by band, summing to one. Overlap of
// each band with the incident plane wave, interpolated between the sub-bands
// that bracket its reduced quasimomentum.
std::vector<double> populations(const BandStructure& bands, const BeamConfig& beam);

// Dipole factor <XY>_fi (m^2): (1/A) integral over the unit cell centred on a
// string of conj(phi_f) x y phi_i. Both states must share a sub-band.
cd dipole_xy(const BlochState& initial, const BlochState& final_state, double lattice_constant);

struct Floors {
    double population = 1e-4;       // minimum P_i
    double dipole_relative = 1e-6;  // minimum |<XY>|^2 / max |<XY>|^2
};

struct Transition {
    int initial_band = 0;
    int final_band = 0;
    int subband = 0;
    double initial_energy = 0.0;  // eV
    double final_energy = 0.0;    // eV
    double omega_fi = 0.0;        // rad/s
    cd xy;                        // m^2
    double population = 0.0;      // P_i of the initial band
    double weight = 0.0;          // population / kSubbands

    bool operator==(const Transition&) const = default;
};

// Radiative pairs within each sub-band passing both floors. Throws
// ConfigError when nothing survives.
std::vector<Transition> enumerate_transitions(const BandStructure& bands, const std::vector<double>& pops,
                                              const Floors& floors = {});

// Stable 64-bit key over the physics inputs of the solver.
std::uint64_t solver_key(const CrystalConfig& crystal, const BeamConfig& beam);

// Cached solve: loads `path` when it holds a matching key and format version,
// otherwise solves and rewrites it. Empty path disables caching.
BandStructure solve_cached(const CrystalConfig& crystal, const BeamConfig& beam, const std::string& path,
                           bool* cache_hit = nullptr);

void save_band_structure(const BandStructure& bands, const std::string& path);
std::optional<BandStructure> load_band_structure(const std::string& path, std::uint64_t expected_key);

}  // namespace twcr::channeling
