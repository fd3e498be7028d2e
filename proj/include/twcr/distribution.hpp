#pragma once

#include <string>
#include <vector>

#include "twcr/channeling.hpp"
#include "twcr/matrixelement.hpp"

namespace twcr::distribution {

using amplitude::PhotonQuantumNumbers;
using channeling::Transition;

// How the photon frequency inside the amplitude is tied to Delta.
enum class FrequencyRule {
    BetaCDelta,          // omega = c beta Delta, the argument of the evaluation formula
    EnergyConservation,  // omega = c beta Delta + Omega_fi
};

enum class EvaluationMode {
    Peak,        // amplitude at Delta_max
    Integrated,  // mean of omega |m_fi|^2 over Delta in [0, Delta_max] (Gauss-Legendre)
};

struct EmissionOptions {
    FrequencyRule frequency_rule = FrequencyRule::BetaCDelta;
    EvaluationMode evaluation = EvaluationMode::Peak;
    int delta_nodes = 24;
    bool cr_limit = false;  // ordinary-CR amplitude instead of the twisted one
    amplitude::AmplitudeOptions amplitude;
};

// Omega / (1 - beta).
double omega_max(double omega_fi, double beta);
double omega_max(const Transition& t, double beta);

// omega_max cos(Theta - theta_k) / c, or 0 when the cosine is negative.
double delta_max(double omega_max, double Theta, double theta_k);

// dW/dtheta_k for one transition and helicity (arbitrary units).
double emission_probability(const Transition& t, const PhotonQuantumNumbers& qn, double Theta, double Phi, double P_i,
                            double beta, const EmissionOptions& opt = {});

// Same, reusing a kernel prepared for (qn, Theta, Phi).
double emission_probability(const amplitude::AmplitudeKernel& kernel, const Transition& t,
                            const PhotonQuantumNumbers& qn, double Theta, double P_i, double beta,
                            const EmissionOptions& opt);

struct AngularGrid {
    double theta_min_deg = 0.0;
    double theta_max_deg = 6.0;
    int theta_steps = 121;  // inclusive of both ends
    double phi_min_deg = 0.0;
    double phi_max_deg = 360.0;
    int phi_steps = 181;  // phi_max excluded (periodic)

    void validate() const;
    std::vector<double> theta_deg() const;
    std::vector<double> phi_deg() const;
};

enum class HelicityMode { Sum, Single };

struct MapOptions {
    EmissionOptions emission;
    HelicityMode helicity = HelicityMode::Sum;
    int lambda = 1;         // used when helicity == Single
    int workers = 0;        // 0: hardware concurrency
    bool normalize = true;  // divide by the map maximum
};

struct AngularMap {
    int m = 0;
    double theta_k_deg = 0.0;
    AngularGrid grid;
    std::vector<double> theta_deg, phi_deg;
    std::vector<double> values;  // theta-major: values[i * phi.size() + j]
    double raw_max = 0.0;        // scale factor removed by normalisation

    double at(std::size_t i, std::size_t j) const { return values[i * phi_deg.size() + j]; }
};

// Sum over transitions (weighted by their populations) and helicities on
// every grid node. Node values are independent of the worker count.
AngularMap angular_map(const std::vector<Transition>& transitions, double beta, int m, double theta_k_rad,
                       const AngularGrid& grid, const MapOptions& opt = {});

// ---- map analysis --------------------------------------------------------

struct LocalMaximum {
    std::size_t theta_index = 0, phi_index = 0;
    double theta_deg = 0.0, phi_deg = 0.0, value = 0.0;
};

// Nodes strictly above all their neighbours (Phi periodic; the Theta = 0
// row is treated as the single pole node it represents). Peaks below
// `relative_floor` times the map maximum are ignored.
std::vector<LocalMaximum> local_maxima(const AngularMap& map, double relative_floor = 1e-3);

// Index of the Theta row with the largest Phi-average.
std::size_t peak_ring(const AngularMap& map);

// std/mean over Phi on the peak ring.
double phi_anisotropy(const AngularMap& map);

// Pearson correlation of two maps on the same grid.
double correlation(const AngularMap& a, const AngularMap& b);

// max |a - b| after scaling each map to unit maximum.
double max_relative_deviation(const AngularMap& a, const AngularMap& b);

// File stem twcr_m{m}_tk{theta_k}.
std::string map_stem(int m, double theta_k_deg);

std::string to_csv(const AngularMap& map);

}  // namespace twcr::distribution
