// twcr: batch front end for twisted-photon channeling-radiation maps.
//
//   twcr run <config.json>     angular maps + manifest
//   twcr solve <config.json>   band structure only (fills the solver cache)
//   twcr verify <config.json>  closed forms against numerical oracles

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>

#include "twcr/config.hpp"
#include "twcr/constants.hpp"
#include "twcr/errors.hpp"
#include "twcr/pipeline.hpp"
#include "twcr/verify.hpp"

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
    int workers = -1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("config", c.config_path, "JSON configuration file")->required();
    cmd->add_option("--set", c.overrides, "Override a field, e.g. --set photon.m=[3,6,9]");
    cmd->add_option("-o,--output", c.output, "Output directory (beats TWCR_OUTPUT_DIR and the config)");
    cmd->add_option("-j,--workers", c.workers, "Worker threads (0: all cores)");
}

twcr::config::RunConfig load(const Common& c) {
    auto tree = twcr::config::read_tree(c.config_path);
    for (const auto& o : c.overrides) twcr::config::apply_override(tree, o);
    if (!c.output.empty()) twcr::config::apply_override(tree, "output.directory=\"" + c.output + "\"");
    if (c.workers >= 0) twcr::config::apply_override(tree, fmt::format("workers={}", c.workers));
    auto cfg = twcr::config::from_json(tree);
    // an explicit flag wins over the environment
    if (!c.output.empty()) setenv(twcr::pipeline::kOutputDirEnv, c.output.c_str(), 1);
    return cfg;
}

int cmd_solve(const Common& c) {
    const auto cfg = load(c);
    const auto s = twcr::pipeline::solve(cfg);
    std::cout << fmt::format("cache: {}\n", s.cache_hit ? "hit" : "written");
    std::cout << fmt::format("basis {} plane waves, orthonormality {:.2e}, saddle {:.4f} eV\n",
                             s.bands.stats.basis_size, s.bands.stats.orthonormality_residual, s.bands.saddle);
    std::cout << fmt::format("bands: {} bound, {} retained\n", s.bands.bound_bands, s.bands.retained_bands);
    for (int b = 0; b < s.bands.retained_bands; ++b) {
        const auto& lo = s.bands.states.front()[static_cast<std::size_t>(b)];
        const auto& hi = s.bands.states.back()[static_cast<std::size_t>(b)];
        std::cout << fmt::format("  band {:2d}: {:10.4f} .. {:10.4f} eV  P = {:.4e}\n", b, lo.energy, hi.energy,
                                 s.populations[static_cast<std::size_t>(b)]);
    }
    std::cout << fmt::format("transitions: {}\n", s.transitions.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted-photon emission maps for axially channeled electrons"};
    app.require_subcommand(1);
    app.set_version_flag("--version", twcr::pipeline::kVersion);
    Common run_opts, verify_opts, solve_opts;
    auto* run = app.add_subcommand("run", "Compute angular maps and a manifest");
    auto* verify = app.add_subcommand("verify", "Check closed forms against numerical oracles");
    auto* solve = app.add_subcommand("solve", "Solve the band structure and warm the cache");
    add_common(run, run_opts);
    add_common(verify, verify_opts);
    add_common(solve, solve_opts);
    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto cfg = load(run_opts);
            const auto r = twcr::pipeline::run(cfg, std::cout);
            std::cout << fmt::format("manifest: {}\n", r.manifest);
            return 0;
        }
        if (*verify) {
            const auto cfg = load(verify_opts);
            const auto results = twcr::verify::run(cfg, std::cout);
            return twcr::verify::all_passed(results) ? 0 : 1;
        }
        return cmd_solve(solve_opts);
    } catch (const twcr::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
