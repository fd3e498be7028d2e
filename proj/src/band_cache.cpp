#include <cstring>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>

#include "twcr/channeling.hpp"

namespace twcr::channeling {
namespace {

constexpr char kMagic[8] = {'T', 'W', 'C', 'R', 'B', 'N', 'D', 'S'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

std::uint64_t solver_key(const CrystalConfig& crystal, const BeamConfig& beam) {
    const auto dt = crystal.doyle_turner();
    std::string s = fmt::format("v{}|{}|{}|{:.17g}|{:.17g}|{}|{:.17g}|{:.17g}", kFormatVersion, crystal.element,
                                crystal.axis, crystal.lattice_constant, crystal.thermal_amplitude, crystal.basis_cutoff,
                                beam.energy_mev, beam.incidence_rad);
    for (int i = 0; i < 4; ++i) s += fmt::format("|{:.17g},{:.17g}", dt.a[i], dt.b[i]);
    return fnv1a(s);
}

void save_band_structure(const BandStructure& bs, const std::string& path) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) return;
        os.write(kMagic, sizeof kMagic);
        put(os, kFormatVersion);
        put(os, solver_key(bs.crystal, bs.beam));
        put(os, bs.saddle);
        put(os, bs.bound_bands);
        put(os, bs.retained_bands);
        put(os, bs.total_bands);
        put(os, bs.stats);
        const auto n_sub = static_cast<std::int32_t>(bs.states.size());
        put(os, n_sub);
        for (const auto& sb : bs.states) {
            put(os, static_cast<std::int32_t>(sb.size()));
            for (const auto& s : sb) {
                put(os, s.band);
                put(os, s.subband);
                put(os, s.energy);
                put(os, s.k);
                put(os, s.g_unit);
                put(os, s.coefficients.half());
                os.write(reinterpret_cast<const char*>(s.coefficients.data().data()),
                         static_cast<std::streamsize>(s.coefficients.size() * sizeof(cd)));
            }
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
}

std::optional<BandStructure> load_band_structure(const std::string& path, std::uint64_t expected_key) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[sizeof kMagic];
    std::uint32_t version = 0;
    std::uint64_t key = 0;
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
    if (!get(is, version) || version != kFormatVersion) return std::nullopt;
    if (!get(is, key) || key != expected_key) return std::nullopt;
    BandStructure bs;
    std::int32_t n_sub = 0;
    if (!get(is, bs.saddle) || !get(is, bs.bound_bands) || !get(is, bs.retained_bands) || !get(is, bs.total_bands) ||
        !get(is, bs.stats) || !get(is, n_sub) || n_sub != kSubbands)
        return std::nullopt;
    bs.states.resize(static_cast<std::size_t>(n_sub));
    for (auto& sb : bs.states) {
        std::int32_t count = 0;
        if (!get(is, count) || count != bs.retained_bands) return std::nullopt;
        sb.resize(static_cast<std::size_t>(count));
        for (auto& s : sb) {
            int half = 0;
            if (!get(is, s.band) || !get(is, s.subband) || !get(is, s.energy) || !get(is, s.k) || !get(is, s.g_unit) ||
                !get(is, half) || half < 0 || half > 64)
                return std::nullopt;
            s.coefficients = FourierGrid(half);
            if (!is.read(reinterpret_cast<char*>(s.coefficients.data().data()),
                         static_cast<std::streamsize>(s.coefficients.size() * sizeof(cd))))
                return std::nullopt;
        }
    }
    return bs;
}

BandStructure solve_cached(const CrystalConfig& crystal, const BeamConfig& beam, const std::string& path,
                           bool* cache_hit) {
    if (cache_hit) *cache_hit = false;
    if (!path.empty()) {
        if (auto loaded = load_band_structure(path, solver_key(crystal, beam))) {
            loaded->crystal = crystal;
            loaded->beam = beam;
            if (cache_hit) *cache_hit = true;
            return std::move(*loaded);
        }
    }
    BandStructure bs = solve_band_structure(crystal, beam);
    if (!path.empty()) save_band_structure(bs, path);
    return bs;
}

}  // namespace twcr::channeling
