#include "twcr/distribution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <thread>

#include "twcr/constants.hpp"
#include "twcr/errors.hpp"
#include "twcr/quadrature.hpp"

namespace twcr::distribution {

using amplitude::AmplitudeKernel;
using amplitude::cd;
using constants::c;
using constants::pi;

double omega_max(double omega_fi, double beta) { return omega_fi / (1.0 - beta); }

double omega_max(const Transition& t, double beta) { return omega_max(t.omega_fi, beta); }

double delta_max(double w_max, double Theta, double theta_k) {
    const double v = w_max * std::cos(Theta - theta_k) / c;
    return v > 0.0 ? v : 0.0;
}

namespace {

struct ZArgs {
    double omega, D, B;
};

// Photon frequency and Z-integral arguments at longitudinal transfer Delta.
ZArgs z_args(const AmplitudeKernel& kernel, const Transition& t, const PhotonQuantumNumbers& qn, double Theta,
             double Delta, bool at_peak, double beta, const EmissionOptions& opt) {
    const double cos_a = std::cos(Theta) * std::cos(qn.theta_k);
    if (opt.frequency_rule == FrequencyRule::BetaCDelta) {
        const double omega = c * beta * Delta;
        return {omega, Delta * (1.0 - beta * cos_a), kernel.bessel_b(omega)};
    }
    const double omega = c * beta * Delta + t.omega_fi;
    const double B = kernel.bessel_b(omega);
    if (opt.amplitude.bessel_argument == amplitude::BesselArgument::Transverse) {
        // D - B = Delta (1 - beta cos d) - (Omega/c) cos d, d = Theta - theta_k,
        // written so the ring Theta = theta_k at Delta_max gives exactly zero.
        const double d = Theta - qn.theta_k;
        const double gap = at_peak ? beta * omega_max(t, beta) / c * std::cos(d) * 2.0 * std::pow(std::sin(0.5 * d), 2)
                                   : Delta * (1.0 - beta * std::cos(d)) - t.omega_fi / c * std::cos(d);
        return {omega, B + gap, B};
    }
    return {omega, Delta - omega / c * cos_a, B};
}

cd amplitude_at(const AmplitudeKernel& kernel, const Transition& t, const ZArgs& z, double beta,
                const EmissionOptions& opt) {
    return opt.cr_limit ? kernel.cr(t, z.omega, z.D, z.B, beta) : kernel.twisted(t, z.omega, z.D, z.B, beta);
}

}  // namespace

double emission_probability(const AmplitudeKernel& kernel, const Transition& t, const PhotonQuantumNumbers& qn,
                            double Theta, double P_i, double beta, const EmissionOptions& opt) {
    if (P_i == 0.0 || t.xy == 0.0) return 0.0;
    const double d_max = delta_max(omega_max(t, beta), Theta, qn.theta_k);
    if (d_max <= 0.0) return 0.0;
    const double pre = constants::alpha_fs / (4.0 * pi) * std::sin(qn.theta_k) * P_i;
    if (opt.evaluation == EvaluationMode::Peak) {
        const auto z = z_args(kernel, t, qn, Theta, d_max, true, beta, opt);
        return pre * (c * beta * d_max) * std::norm(amplitude_at(kernel, t, z, beta, opt));
    }
    const auto& rule = quadrature::gauss_legendre(opt.delta_nodes);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double Delta = 0.5 * d_max * (rule.nodes[i] + 1.0);
        const auto z = z_args(kernel, t, qn, Theta, Delta, false, beta, opt);
        acc += 0.5 * rule.weights[i] * (c * beta * Delta) * std::norm(amplitude_at(kernel, t, z, beta, opt));
    }
    return pre * acc;
}

double emission_probability(const Transition& t, const PhotonQuantumNumbers& qn, double Theta, double Phi, double P_i,
                            double beta, const EmissionOptions& opt) {
    const AmplitudeKernel kernel(qn, Theta, Phi, opt.amplitude);
    return emission_probability(kernel, t, qn, Theta, P_i, beta, opt);
}

void AngularGrid::validate() const {
    if (theta_steps < 2) throw ConfigError("need at least 2 steps", "grid.theta_steps");
    if (phi_steps < 4) throw ConfigError("need at least 4 steps", "grid.phi_steps");
    if (!(theta_min_deg >= 0.0 && theta_max_deg > theta_min_deg && theta_max_deg <= 180.0))
        throw ConfigError("need 0 <= theta_min_deg < theta_max_deg <= 180", "grid.theta_max_deg");
    if (!(phi_max_deg > phi_min_deg && phi_max_deg - phi_min_deg <= 360.0))
        throw ConfigError("need phi_min_deg < phi_max_deg within one turn", "grid.phi_max_deg");
}

std::vector<double> AngularGrid::theta_deg() const {
    std::vector<double> v(static_cast<std::size_t>(theta_steps));
    for (int i = 0; i < theta_steps; ++i)
        v[static_cast<std::size_t>(i)] = theta_min_deg + (theta_max_deg - theta_min_deg) * i / (theta_steps - 1);
    return v;
}

std::vector<double> AngularGrid::phi_deg() const {
    std::vector<double> v(static_cast<std::size_t>(phi_steps));
    for (int j = 0; j < phi_steps; ++j)
        v[static_cast<std::size_t>(j)] = phi_min_deg + (phi_max_deg - phi_min_deg) * j / phi_steps;
    return v;
}

AngularMap angular_map(const std::vector<Transition>& transitions, double beta, int m, double theta_k_rad,
                       const AngularGrid& grid, const MapOptions& opt) {
    grid.validate();
    if (transitions.empty()) throw ConfigError("empty transition set", "floors");
    PhotonQuantumNumbers base{m, 1, theta_k_rad};
    base.validate();

    AngularMap map;
    map.m = m;
    map.theta_k_deg = theta_k_rad * 180.0 / pi;
    map.grid = grid;
    map.theta_deg = grid.theta_deg();
    map.phi_deg = grid.phi_deg();
    const std::size_t nt = map.theta_deg.size(), np = map.phi_deg.size();
    map.values.assign(nt * np, 0.0);

    std::vector<int> lambdas =
        opt.helicity == HelicityMode::Sum ? std::vector<int>{1, -1} : std::vector<int>{opt.lambda};

    // When omega is proportional to Delta every transition contributes the
    // same angular shape times weight |XY|^2 Omega^3, so one reference
    // transition per node suffices.
    const bool scaling =
        opt.emission.frequency_rule == FrequencyRule::BetaCDelta && opt.emission.evaluation == EvaluationMode::Peak;
    Transition ref = transitions.front();
    ref.xy = 1.0;
    double scale = 0.0;
    if (scaling) {
        for (const auto& t : transitions) scale += t.weight * std::norm(t.xy) * std::pow(t.omega_fi / ref.omega_fi, 3);
    }

    auto node = [&](std::size_t i, std::size_t j) {
        const double Theta = map.theta_deg[i] * pi / 180.0, Phi = map.phi_deg[j] * pi / 180.0;
        double acc = 0.0;
        for (int lambda : lambdas) {
            PhotonQuantumNumbers qn = base;
            qn.lambda = lambda;
            const AmplitudeKernel kernel(qn, Theta, Phi, opt.emission.amplitude);
            if (scaling) {
                acc += scale * emission_probability(kernel, ref, qn, Theta, 1.0, beta, opt.emission);
            } else {
                for (const auto& t : transitions)
                    acc += emission_probability(kernel, t, qn, Theta, t.weight, beta, opt.emission);
            }
        }
        map.values[i * np + j] = acc;
    };

    unsigned workers = opt.workers > 0 ? static_cast<unsigned>(opt.workers) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(nt)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < nt; i = next++)
            for (std::size_t j = 0; j < np; ++j) node(i, j);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    map.raw_max = *std::max_element(map.values.begin(), map.values.end());
    if (opt.normalize && map.raw_max > 0.0)
        for (double& v : map.values) v /= map.raw_max;
    return map;
}

namespace {

double max_of(const AngularMap& m) { return *std::max_element(m.values.begin(), m.values.end()); }

}  // namespace

std::vector<LocalMaximum> local_maxima(const AngularMap& map, double relative_floor) {
    const std::size_t nt = map.theta_deg.size(), np = map.phi_deg.size();
    const bool pole = map.theta_deg.front() == 0.0;
    const double floor = relative_floor * max_of(map);
    std::vector<LocalMaximum> out;

    auto value = [&](std::size_t i, std::size_t j) { return map.at(i, j); };
    auto pole_value = [&] {
        double s = 0.0;
        for (std::size_t j = 0; j < np; ++j) s += value(0, j);
        return s / static_cast<double>(np);
    };

    if (pole) {
        const double v = pole_value();
        bool is_max = v >= floor && nt > 1;
        for (std::size_t j = 0; j < np && is_max; ++j) is_max = v > value(1, j);
        if (is_max) out.push_back({0, 0, 0.0, 0.0, v});
    }
    for (std::size_t i = pole ? 1 : 0; i < nt; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            const double v = value(i, j);
            if (v < floor) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                const long ii = static_cast<long>(i) + di;
                if (ii < 0 || ii >= static_cast<long>(nt)) continue;
                if (ii == 0 && pole) {
                    is_max = v > pole_value();
                    continue;
                }
                for (int dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const std::size_t jj = (j + np + static_cast<std::size_t>(static_cast<long>(np) + dj)) % np;
                    is_max = v > value(static_cast<std::size_t>(ii), jj);
                }
            }
            if (is_max) out.push_back({i, j, map.theta_deg[i], map.phi_deg[j], v});
        }
    }
    return out;
}

std::size_t peak_ring(const AngularMap& map) {
    const std::size_t nt = map.theta_deg.size(), np = map.phi_deg.size();
    std::size_t best = 0;
    double best_mean = -1.0;
    for (std::size_t i = 0; i < nt; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < np; ++j) s += map.at(i, j);
        if (s > best_mean) {
            best_mean = s;
            best = i;
        }
    }
    return best;
}

double phi_anisotropy(const AngularMap& map) {
    const std::size_t i = peak_ring(map), np = map.phi_deg.size();
    double mean = 0.0;
    for (std::size_t j = 0; j < np; ++j) mean += map.at(i, j);
    mean /= static_cast<double>(np);
    double var = 0.0;
    for (std::size_t j = 0; j < np; ++j) var += std::pow(map.at(i, j) - mean, 2);
    var /= static_cast<double>(np);
    return mean > 0.0 ? std::sqrt(var) / mean : 0.0;
}

double correlation(const AngularMap& a, const AngularMap& b) {
    if (a.values.size() != b.values.size()) throw DomainError("correlation: grids differ");
    const double n = static_cast<double>(a.values.size());
    const double ma = std::accumulate(a.values.begin(), a.values.end(), 0.0) / n;
    const double mb = std::accumulate(b.values.begin(), b.values.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double x = a.values[k] - ma, y = b.values[k] - mb;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    return sab / std::sqrt(saa * sbb);
}

double max_relative_deviation(const AngularMap& a, const AngularMap& b) {
    if (a.values.size() != b.values.size()) throw DomainError("max_relative_deviation: grids differ");
    const double na = max_of(a), nb = max_of(b);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        worst = std::max(worst, std::abs(a.values[k] / na - b.values[k] / nb));
    return worst;
}

std::string map_stem(int m, double theta_k_deg) { return fmt::format("twcr_m{}_tk{:g}", m, theta_k_deg); }

std::string to_csv(const AngularMap& map) {
    std::string out = "Theta_deg,Phi_deg,value\n";
    for (std::size_t i = 0; i < map.theta_deg.size(); ++i)
        for (std::size_t j = 0; j < map.phi_deg.size(); ++j)
            out += fmt::format("{:.6f},{:.6f},{:.17g}\n", map.theta_deg[i], map.phi_deg[j], map.at(i, j));
    return out;
}

}  // namespace twcr::distribution
