#include "twcr/config.hpp"

#include <fmt/format.h>
#include <fstream>
#include <set>

#include "twcr/errors.hpp"

namespace twcr::config {

using nlohmann::json;

namespace {

constexpr double kAngstrom = 1e-10;

// Walks one JSON object, rejecting keys that are never read.
class Section {
  public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError("expected an object", path_.empty() ? "<root>" : path_);
    }

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [key, _] : node_.items())
            if (!seen_.count(key)) throw ConfigError("unknown key", join(key));
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    const json& raw(const std::string& key) { return node_.at(key); }

    template <typename T>
    void read(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = node_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("has the wrong type", join(key));
        }
    }

    Section child(const std::string& key) {
        seen_.insert(key);
        return Section(node_.at(key), join(key));
    }

  private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E>
E pick(const std::string& value, std::initializer_list<std::pair<const char*, E>> options, const std::string& path) {
    std::string allowed;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError("must be one of: " + allowed, path);
}

template <typename E>
std::string name_of(E v, std::initializer_list<std::pair<const char*, E>> options) {
    for (const auto& [name, e] : options)
        if (e == v) return name;
    return "?";
}

const std::initializer_list<std::pair<const char*, distribution::FrequencyRule>> kRules = {
    {"beta_c_delta", distribution::FrequencyRule::BetaCDelta},
    {"energy_conservation", distribution::FrequencyRule::EnergyConservation}};
const std::initializer_list<std::pair<const char*, distribution::EvaluationMode>> kModes = {
    {"peak", distribution::EvaluationMode::Peak}, {"integrated", distribution::EvaluationMode::Integrated}};
const std::initializer_list<std::pair<const char*, amplitude::BesselArgument>> kBessel = {
    {"transverse", amplitude::BesselArgument::Transverse}, {"full", amplitude::BesselArgument::Full}};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

RunConfig from_json(const json& tree) {
    RunConfig cfg;
    {
        Section root(tree, "");
        if (root.has("beam")) {
            auto s = root.child("beam");
            s.read("energy_mev", cfg.beam.energy_mev);
            double mrad = cfg.beam.incidence_rad * 1e3;
            s.read("incidence_mrad", mrad);
            cfg.beam.incidence_rad = mrad * 1e-3;
        }
        if (root.has("crystal")) {
            auto s = root.child("crystal");
            s.read("element", cfg.crystal.element);
            s.read("axis", cfg.crystal.axis);
            double a = cfg.crystal.lattice_constant / kAngstrom, u = cfg.crystal.thermal_amplitude / kAngstrom;
            s.read("lattice_constant_angstrom", a);
            s.read("thermal_amplitude_angstrom", u);
            cfg.crystal.lattice_constant = a * kAngstrom;
            cfg.crystal.thermal_amplitude = u * kAngstrom;
            s.read("basis_cutoff", cfg.crystal.basis_cutoff);
            if (s.has("doyle_turner")) {
                auto d = s.child("doyle_turner");
                channeling::DoyleTurner dt;
                std::vector<double> av, bv;
                d.read("a_angstrom", av);
                d.read("b_angstrom2", bv);
                if (av.size() != 4 || bv.size() != 4)
                    throw ConfigError("needs four a and four b coefficients", "crystal.doyle_turner");
                std::copy(av.begin(), av.end(), dt.a.begin());
                std::copy(bv.begin(), bv.end(), dt.b.begin());
                cfg.crystal.form_factor = dt;
            }
        }
        if (root.has("photon")) {
            auto s = root.child("photon");
            s.read("m", cfg.photon.m);
            s.read("theta_k_deg", cfg.photon.theta_k_deg);
            if (s.has("helicity")) {
                const json& h = s.raw("helicity");
                if (h.is_string() && h.get<std::string>() == "sum") {
                    cfg.photon.helicity = distribution::HelicityMode::Sum;
                } else if (h.is_number_integer() && (h.get<int>() == 1 || h.get<int>() == -1)) {
                    cfg.photon.helicity = distribution::HelicityMode::Single;
                    cfg.photon.lambda = h.get<int>();
                } else {
                    throw ConfigError("must be \"sum\", 1 or -1", "photon.helicity");
                }
            }
            std::string b = name_of(cfg.photon.bessel_argument, kBessel);
            s.read("bessel_argument", b);
            cfg.photon.bessel_argument = pick(b, kBessel, "photon.bessel_argument");
        }
        if (root.has("grid")) {
            auto s = root.child("grid");
            s.read("theta_min_deg", cfg.grid.theta_min_deg);
            s.read("theta_max_deg", cfg.grid.theta_max_deg);
            s.read("theta_steps", cfg.grid.theta_steps);
            s.read("phi_min_deg", cfg.grid.phi_min_deg);
            s.read("phi_max_deg", cfg.grid.phi_max_deg);
            s.read("phi_steps", cfg.grid.phi_steps);
        }
        if (root.has("floors")) {
            auto s = root.child("floors");
            s.read("population", cfg.floors.population);
            s.read("dipole_relative", cfg.floors.dipole_relative);
        }
        if (root.has("model")) {
            auto s = root.child("model");
            std::string rule = name_of(cfg.model.frequency_rule, kRules), mode = name_of(cfg.model.evaluation, kModes);
            s.read("frequency_rule", rule);
            s.read("evaluation", mode);
            cfg.model.frequency_rule = pick(rule, kRules, "model.frequency_rule");
            cfg.model.evaluation = pick(mode, kModes, "model.evaluation");
            s.read("delta_nodes", cfg.model.delta_nodes);
            s.read("normalize", cfg.model.normalize);
        }
        if (root.has("output")) {
            auto s = root.child("output");
            s.read("directory", cfg.output.directory);
            s.read("json", cfg.output.json);
            s.read("cache", cfg.output.cache);
        }
        root.read("workers", cfg.workers);
        if (root.has("oracle")) {
            auto s = root.child("oracle");
            s.read("samples", cfg.oracle.samples);
            s.read("seed", cfg.oracle.seed);
            s.read("inject_fault", cfg.oracle.inject_fault);
        }
    }  // unknown keys are reported here, before value validation
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    beam.validate();
    crystal.validate();
    grid.validate();
    if (photon.m.empty()) throw ConfigError("must not be empty", "photon.m");
    if (photon.theta_k_deg.empty()) throw ConfigError("must not be empty", "photon.theta_k_deg");
    for (std::size_t i = 0; i < photon.m.size(); ++i)
        if (std::abs(photon.m[i]) > amplitude::kMaxTam)
            throw ConfigError(fmt::format("|m| must not exceed {}", amplitude::kMaxTam),
                              fmt::format("photon.m[{}]", i));
    for (std::size_t i = 0; i < photon.theta_k_deg.size(); ++i)
        if (!(photon.theta_k_deg[i] > 0.0 && photon.theta_k_deg[i] < 90.0))
            throw ConfigError("must lie in (0, 90)", fmt::format("photon.theta_k_deg[{}]", i));
    if (floors.population < 0.0 || floors.population > 1.0)
        throw ConfigError("must lie in [0, 1]", "floors.population");
    if (floors.dipole_relative < 0.0 || floors.dipole_relative > 1.0)
        throw ConfigError("must lie in [0, 1]", "floors.dipole_relative");
    if (model.delta_nodes < 2 || model.delta_nodes > 512)
        throw ConfigError("must lie in [2, 512]", "model.delta_nodes");
    if (workers < 0) throw ConfigError("must be non-negative", "workers");
    if (output.directory.empty()) throw ConfigError("must not be empty", "output.directory");
    if (oracle.samples < 1) throw ConfigError("must be positive", "oracle.samples");
    if (!oracle.inject_fault.empty() && oracle.inject_fault != "z_integral_sign")
        throw ConfigError("unknown fault (supported: z_integral_sign)", "oracle.inject_fault");
}

json to_json(const RunConfig& cfg) {
    json j;
    j["beam"] = {{"energy_mev", cfg.beam.energy_mev}, {"incidence_mrad", cfg.beam.incidence_rad * 1e3}};
    j["crystal"] = {{"element", cfg.crystal.element},
                    {"axis", cfg.crystal.axis},
                    {"lattice_constant_angstrom", cfg.crystal.lattice_constant / kAngstrom},
                    {"thermal_amplitude_angstrom", cfg.crystal.thermal_amplitude / kAngstrom},
                    {"basis_cutoff", cfg.crystal.basis_cutoff}};
    if (cfg.crystal.form_factor)
        j["crystal"]["doyle_turner"] = {{"a_angstrom", cfg.crystal.form_factor->a},
                                        {"b_angstrom2", cfg.crystal.form_factor->b}};
    j["photon"] = {{"m", cfg.photon.m},
                   {"theta_k_deg", cfg.photon.theta_k_deg},
                   {"bessel_argument", name_of(cfg.photon.bessel_argument, kBessel)}};
    if (cfg.photon.helicity == distribution::HelicityMode::Sum)
        j["photon"]["helicity"] = "sum";
    else
        j["photon"]["helicity"] = cfg.photon.lambda;
    j["grid"] = {{"theta_min_deg", cfg.grid.theta_min_deg}, {"theta_max_deg", cfg.grid.theta_max_deg},
                 {"theta_steps", cfg.grid.theta_steps},     {"phi_min_deg", cfg.grid.phi_min_deg},
                 {"phi_max_deg", cfg.grid.phi_max_deg},     {"phi_steps", cfg.grid.phi_steps}};
    j["floors"] = {{"population", cfg.floors.population}, {"dipole_relative", cfg.floors.dipole_relative}};
    j["model"] = {{"frequency_rule", name_of(cfg.model.frequency_rule, kRules)},
                  {"evaluation", name_of(cfg.model.evaluation, kModes)},
                  {"delta_nodes", cfg.model.delta_nodes},
                  {"normalize", cfg.model.normalize}};
    j["output"] = {{"directory", cfg.output.directory}, {"json", cfg.output.json}, {"cache", cfg.output.cache}};
    j["workers"] = cfg.workers;
    j["oracle"] = {
        {"samples", cfg.oracle.samples}, {"seed", cfg.oracle.seed}, {"inject_fault", cfg.oracle.inject_fault}};
    return j;
}

json read_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("syntax error: ") + e.what(), path);
    }
}

void apply_override(json& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value", assignment);
    const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &tree;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("empty path component", key);
        if (!node->is_object()) *node = json::object();
        node = &(*node)[part];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = value;
}

std::string physics_hash(const RunConfig& cfg) {
    json j = to_json(cfg);
    j.erase("output");
    j.erase("workers");
    j.erase("oracle");
    return fmt::format("{:016x}", fnv1a(j.dump()));
}

distribution::MapOptions map_options(const RunConfig& cfg) {
    distribution::MapOptions o;
    o.emission.frequency_rule = cfg.model.frequency_rule;
    o.emission.evaluation = cfg.model.evaluation;
    o.emission.delta_nodes = cfg.model.delta_nodes;
    o.emission.amplitude.bessel_argument = cfg.photon.bessel_argument;
    o.helicity = cfg.photon.helicity;
    o.lambda = cfg.photon.lambda;
    o.workers = cfg.workers;
    o.normalize = cfg.model.normalize;
    return o;
}

}  // namespace twcr::config
