#include "twcr/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>

#include "twcr/constants.hpp"
#include "twcr/errors.hpp"

namespace twcr::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string output_directory(const config::RunConfig& cfg) {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return cfg.output.directory;
}

namespace {

std::string cache_file(const config::RunConfig& cfg) {
    if (!cfg.output.cache) return {};
    return (fs::path(output_directory(cfg)) / ".cache" /
            fmt::format("bands-{:016x}.bin", channeling::solver_key(cfg.crystal, cfg.beam)))
        .string();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

json transition_summary(const std::vector<channeling::Transition>& ts) {
    double lo = 1e300, hi = 0.0;
    for (const auto& t : ts) {
        lo = std::min(lo, t.omega_fi);
        hi = std::max(hi, t.omega_fi);
    }
    // strongest emitters by weight |XY|^2 Omega^3
    std::vector<std::size_t> order(ts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto strength = [&](std::size_t i) { return ts[i].weight * std::norm(ts[i].xy) * std::pow(ts[i].omega_fi, 3); };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return strength(a) > strength(b); });
    json top = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(10, order.size()); ++k) {
        const auto& t = ts[order[k]];
        top.push_back({{"initial_band", t.initial_band},
                       {"final_band", t.final_band},
                       {"subband", t.subband},
                       {"hbar_omega_fi_eV", t.omega_fi * constants::hbar_eVs},
                       {"abs_xy_angstrom2", std::abs(t.xy) / (constants::angstrom * constants::angstrom)},
                       {"population", t.population}});
    }
    return {{"count", ts.size()},
            {"hbar_omega_min_eV", lo * constants::hbar_eVs},
            {"hbar_omega_max_eV", hi * constants::hbar_eVs},
            {"strongest", top}};
}

json approximation_flags(const config::RunConfig& cfg) {
    json flags = json::array();
    flags.push_back("dipole approximation for the transverse current");
    flags.push_back("Z integral over a semi-infinite crystal");
    flags.push_back("Z integral set to zero where Delta - A <= B");
    flags.push_back(cfg.model.evaluation == distribution::EvaluationMode::Peak
                        ? "amplitude evaluated at Delta_max"
                        : "omega |m_fi|^2 averaged over Delta in [0, Delta_max]");
    flags.push_back(cfg.model.frequency_rule == distribution::FrequencyRule::BetaCDelta
                        ? "photon frequency omega = c beta Delta"
                        : "photon frequency omega = c beta Delta + Omega_fi");
    flags.push_back(cfg.photon.bessel_argument == amplitude::BesselArgument::Transverse
                        ? "Bessel argument uses the transverse wave number"
                        : "Bessel argument uses the full wave number");
    flags.push_back("normalisation constants L, R and V_TW left symbolic");
    return flags;
}

}  // namespace

SolveResult solve(const config::RunConfig& cfg) {
    SolveResult r;
    r.bands = channeling::solve_cached(cfg.crystal, cfg.beam, cache_file(cfg), &r.cache_hit);
    r.populations = channeling::populations(r.bands, cfg.beam);
    r.transitions = channeling::enumerate_transitions(r.bands, r.populations, cfg.floors);
    return r;
}

RunResult run(const config::RunConfig& cfg, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    const fs::path dir = output_directory(cfg);
    fs::create_directories(dir);

    RunResult result;
    try {
        const SolveResult s = solve(cfg);
        log << fmt::format("bands: {} retained ({} bound), saddle {:.3f} eV, ground {:.4f} eV{}\n",
                           s.bands.retained_bands, s.bands.bound_bands, s.bands.saddle, s.bands.states[0][0].energy,
                           s.cache_hit ? " [cache]" : "");
        log << fmt::format("transitions: {}\n", s.transitions.size());

        const auto opt = config::map_options(cfg);
        const double beta = cfg.beam.beta();
        json maps = json::array();
        for (double tk : cfg.photon.theta_k_deg) {
            for (int m : cfg.photon.m) {
                const auto map =
                    distribution::angular_map(s.transitions, beta, m, tk * constants::pi / 180.0, cfg.grid, opt);
                const std::string stem = distribution::map_stem(m, tk);
                const fs::path csv = dir / (stem + ".csv");
                result.files.push_back(csv.string());
                write_file(csv, distribution::to_csv(map));
                if (cfg.output.json) {
                    json meta = {
                        {"m", m},
                        {"theta_k_deg", tk},
                        {"helicity", cfg.photon.helicity == distribution::HelicityMode::Sum ? json("sum")
                                                                                            : json(cfg.photon.lambda)},
                        {"beam", config::to_json(cfg)["beam"]},
                        {"crystal", config::to_json(cfg)["crystal"]},
                        {"floors", config::to_json(cfg)["floors"]},
                        {"model", config::to_json(cfg)["model"]},
                        {"raw_scale", map.raw_max},
                        {"normalized", cfg.model.normalize},
                        {"code_version", kVersion},
                        {"config_hash", config::physics_hash(cfg)}};
                    json doc = {{"grid", {{"theta_deg", map.theta_deg}, {"phi_deg", map.phi_deg}}},
                                {"metadata", meta},
                                {"values_file", csv.filename().string()}};
                    const fs::path js = dir / (stem + ".json");
                    result.files.push_back(js.string());
                    write_file(js, doc.dump(2) + "\n");
                }
                maps.push_back(
                    {{"file", csv.filename().string()}, {"m", m}, {"theta_k_deg", tk}, {"raw_scale", map.raw_max}});
                log << fmt::format("wrote {} (raw scale {:.4e})\n", csv.string(), map.raw_max);
            }
        }

        json manifest = {
            {"code_version", kVersion},
            {"config_hash", config::physics_hash(cfg)},
            {"config", config::to_json(cfg)},
            {"solver",
             {{"basis_size", s.bands.stats.basis_size},
              {"hermiticity_residual", s.bands.stats.hermiticity_residual},
              {"orthonormality_residual", s.bands.stats.orthonormality_residual},
              {"ground_energy_eV", s.bands.states[0][0].energy},
              {"saddle_energy_eV", s.bands.saddle},
              {"bound_bands", s.bands.bound_bands},
              {"retained_bands", s.bands.retained_bands},
              {"cache_hit", s.cache_hit}}},
            {"populations", s.populations},
            {"transitions", transition_summary(s.transitions)},
            {"approximation_flags", approximation_flags(cfg)},
            {"maps", maps},
            {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
        const fs::path mf = dir / "manifest.json";
        result.files.push_back(mf.string());
        write_file(mf, manifest.dump(2) + "\n");
        result.manifest = mf.string();
    } catch (...) {
        std::error_code ec;
        for (const auto& f : result.files)
            if (fs::is_regular_file(f, ec)) fs::remove(f, ec);
        throw;
    }
    return result;
}

}  // namespace twcr::pipeline
