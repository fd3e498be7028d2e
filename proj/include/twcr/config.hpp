#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "twcr/channeling.hpp"
#include "twcr/distribution.hpp"

namespace twcr::config {

struct PhotonConfig {
    std::vector<int> m{-3, 3};
    std::vector<double> theta_k_deg{30.0};
    distribution::HelicityMode helicity = distribution::HelicityMode::Sum;
    int lambda = 1;
    amplitude::BesselArgument bessel_argument = amplitude::BesselArgument::Transverse;
};

struct ModelConfig {
    distribution::FrequencyRule frequency_rule = distribution::FrequencyRule::BetaCDelta;
    distribution::EvaluationMode evaluation = distribution::EvaluationMode::Peak;
    int delta_nodes = 24;
    bool normalize = true;
};

struct OutputConfig {
    std::string directory = "twcr_out";
    bool json = true;   // per-map JSON with grid and metadata next to the CSV
    bool cache = true;  // keep the band-structure cache under the output directory
};

struct OracleConfig {
    int samples = 100;
    std::uint64_t seed = 20240917;
    std::string inject_fault;  // "", "z_integral_sign"
};

struct RunConfig {
    channeling::BeamConfig beam;
    channeling::CrystalConfig crystal;
    PhotonConfig photon;
    distribution::AngularGrid grid;
    channeling::Floors floors;
    ModelConfig model;
    OutputConfig output;
    int workers = 0;
    OracleConfig oracle;

    void validate() const;  // throws ConfigError naming the field
};

// Strict parse: unknown keys and wrong types are reported with their path.
RunConfig from_json(const nlohmann::json& tree);
nlohmann::json to_json(const RunConfig& cfg);

// Reads a JSON file; throws ConfigError on I/O or syntax problems.
nlohmann::json read_tree(const std::string& path);

// "section.key=value" with the value parsed as JSON when possible, else as
// a string.
void apply_override(nlohmann::json& tree, const std::string& assignment);

// Hash over the physics-relevant part of the configuration (everything except
// output, workers and oracle settings), as 16 hex digits.
std::string physics_hash(const RunConfig& cfg);

distribution::MapOptions map_options(const RunConfig& cfg);

}  // namespace twcr::config
