#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "twcr/config.hpp"
#include "twcr/errors.hpp"

using namespace twcr;
using namespace twcr::config;
using nlohmann::json;

namespace {

// Path reported by the ConfigError that parsing `tree` raises.
std::string error_path(const json& tree) {
    try {
        from_json(tree);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("empty tree gives the defaults") {
    const RunConfig cfg = from_json(json::object());
    CHECK(cfg.beam.energy_mev == 10.0);
    CHECK(cfg.crystal.axis == "<100>");
    CHECK(cfg.photon.m == std::vector<int>{-3, 3});
    CHECK(cfg.photon.theta_k_deg == std::vector<double>{30.0});
    CHECK(cfg.grid.theta_steps == 121);
    CHECK(cfg.grid.phi_steps == 181);
    CHECK(cfg.model.frequency_rule == distribution::FrequencyRule::BetaCDelta);
}

TEST_CASE("round trip through JSON") {
    RunConfig cfg;
    cfg.beam.energy_mev = 20.0;
    cfg.beam.incidence_rad = 0.5e-3;
    cfg.crystal.basis_cutoff = 9;
    cfg.crystal.form_factor = channeling::DoyleTurner{{1, 2, 3, 4}, {5, 6, 7, 8}};
    cfg.photon.m = {1, 6, 9};
    cfg.photon.theta_k_deg = {5.0, 85.0};
    cfg.photon.helicity = distribution::HelicityMode::Single;
    cfg.photon.lambda = -1;
    cfg.photon.bessel_argument = amplitude::BesselArgument::Full;
    cfg.model.evaluation = distribution::EvaluationMode::Integrated;
    cfg.model.frequency_rule = distribution::FrequencyRule::EnergyConservation;
    cfg.output.json = false;
    cfg.workers = 3;
    const RunConfig back = from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(back.beam.incidence_rad == doctest::Approx(0.5e-3));
    CHECK(back.crystal.form_factor->b[3] == 8.0);
    CHECK(back.photon.lambda == -1);
}

TEST_CASE("unknown keys are reported with their path") {
    CHECK(error_path(json::parse(R"({"bogus": 1})")) == "bogus");
    CHECK(error_path(json::parse(R"({"photon": {"mm": [3]}})")) == "photon.mm");
    CHECK(error_path(json::parse(R"({"crystal": {"doyle_turner": {"a_angstrom": [1,2,3,4],
                                    "b_angstrom2": [1,2,3,4], "c": 0}}})")) == "crystal.doyle_turner.c");
}

TEST_CASE("type and value errors are reported with their path") {
    CHECK(error_path(json::parse(R"({"beam": {"energy_mev": "ten"}})")) == "beam.energy_mev");
    CHECK(error_path(json::parse(R"({"beam": {"energy_mev": 0.1}})")) == "beam.energy_mev");
    CHECK(error_path(json::parse(R"({"photon": {"m": []}})")) == "photon.m");
    CHECK(error_path(json::parse(R"({"photon": {"m": [3, 13]}})")) == "photon.m[1]");
    CHECK(error_path(json::parse(R"({"photon": {"theta_k_deg": [90]}})")) == "photon.theta_k_deg[0]");
    CHECK(error_path(json::parse(R"({"photon": {"helicity": 0}})")) == "photon.helicity");
    CHECK(error_path(json::parse(R"({"model": {"frequency_rule": "fast"}})")) == "model.frequency_rule");
    CHECK(error_path(json::parse(R"({"crystal": {"axis": "<111>"}})")) == "crystal.axis");
    CHECK(error_path(json::parse(R"({"crystal": {"lattice_constant_angstrom": -1}})")) ==
          "crystal.lattice_constant_angstrom");
    CHECK(error_path(json::parse(R"({"grid": {"theta_steps": 1}})")) == "grid.theta_steps");
    CHECK(error_path(json::parse(R"({"workers": -2})")) == "workers");
    CHECK(error_path(json::parse(R"({"oracle": {"inject_fault": "nope"}})")) == "oracle.inject_fault");
    CHECK(error_path(json::parse(R"({"photon": 3})")) == "photon");

    try {
        from_json(json::parse(R"({"photon": {"mm": 1}})"));
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("photon.mm") != std::string::npos);
    }
}

TEST_CASE("overrides") {
    json tree = json::object();
    apply_override(tree, "photon.m=[3,6,9]");
    apply_override(tree, "photon.helicity=sum");
    apply_override(tree, "beam.energy_mev=12.5");
    apply_override(tree, "output.directory=out dir");
    const RunConfig cfg = from_json(tree);
    CHECK(cfg.photon.m == std::vector<int>{3, 6, 9});
    CHECK(cfg.beam.energy_mev == 12.5);
    CHECK(cfg.output.directory == "out dir");
    CHECK_THROWS_AS(apply_override(tree, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(tree, "=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(tree, "a..b=3"), ConfigError);
}

TEST_CASE("config files may carry comments") {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "twcr_config_test.json";
    {
        std::ofstream out(p);
        out << "{\n  // beam\n  \"beam\": {\"energy_mev\": 15}\n}\n";
    }
    CHECK(from_json(read_tree(p.string())).beam.energy_mev == 15.0);
    {
        std::ofstream out(p);
        out << "{ \"beam\": ";
    }
    CHECK_THROWS_AS(read_tree(p.string()), ConfigError);
    fs::remove(p);
    CHECK_THROWS_AS(read_tree(p.string()), ConfigError);
}

TEST_CASE("physics hash tracks exactly the physics fields") {
    const RunConfig base;
    const std::string h = physics_hash(base);
    CHECK(h.size() == 16);

    RunConfig same = base;
    same.output.directory = "elsewhere";
    same.output.json = false;
    same.output.cache = false;
    same.workers = 7;
    same.oracle.samples = 3;
    same.oracle.seed = 1;
    CHECK(physics_hash(same) == h);

    auto changed = [&](auto mutate) {
        RunConfig c = base;
        mutate(c);
        return physics_hash(c) != h;
    };
    CHECK(changed([](RunConfig& c) { c.beam.energy_mev = 10.5; }));
    CHECK(changed([](RunConfig& c) { c.beam.incidence_rad = 1e-4; }));
    CHECK(changed([](RunConfig& c) { c.crystal.basis_cutoff = 9; }));
    CHECK(changed([](RunConfig& c) { c.crystal.thermal_amplitude *= 1.001; }));
    CHECK(changed([](RunConfig& c) { c.photon.m = {3}; }));
    CHECK(changed([](RunConfig& c) { c.photon.theta_k_deg = {30.0, 40.0}; }));
    CHECK(changed([](RunConfig& c) { c.photon.helicity = distribution::HelicityMode::Single; }));
    CHECK(changed([](RunConfig& c) { c.grid.phi_steps = 180; }));
    CHECK(changed([](RunConfig& c) { c.floors.population = 1e-3; }));
    CHECK(changed([](RunConfig& c) { c.model.delta_nodes = 32; }));
    CHECK(changed([](RunConfig& c) { c.model.normalize = false; }));
}

TEST_CASE("map options follow the config") {
    RunConfig cfg;
    cfg.photon.helicity = distribution::HelicityMode::Single;
    cfg.photon.lambda = -1;
    cfg.workers = 2;
    cfg.model.evaluation = distribution::EvaluationMode::Integrated;
    const auto opt = map_options(cfg);
    CHECK(opt.helicity == distribution::HelicityMode::Single);
    CHECK(opt.lambda == -1);
    CHECK(opt.workers == 2);
    CHECK(opt.emission.evaluation == distribution::EvaluationMode::Integrated);
}
