// starfd - STAR-RIS assisted full-duplex link simulator and optimizer
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef STARFD_SYSTEM_HPP
#define STARFD_SYSTEM_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "starfd/channel.hpp"

namespace starfd {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Per-element energy split and phases of the surface. Energy conservation
/// couples the two sides: transmit_split[m] + reflect_split[m] == 1 exactly
/// as stored (construct through make_profile to keep that invariant).
struct StarRisProfile {
    Eigen::VectorXd transmit_split;  // beta_t, squared amplitudes in [0,1]
    Eigen::VectorXd reflect_split;   // beta_r = 1 - beta_t
    Eigen::VectorXd transmit_phase;  // [0, 2*pi)
    Eigen::VectorXd reflect_phase;   // [0, 2*pi)

    Eigen::Index elements() const { return transmit_split.size(); }
};

/// Builds a profile with reflect_split = 1 - transmit_split exactly.
/// Splits are clamped into [0,1]; phases wrapped into [0, 2*pi).
StarRisProfile make_profile(const Eigen::VectorXd& transmit_split,
                            const Eigen::VectorXd& transmit_phase,
                            const Eigen::VectorXd& reflect_phase);

/// Coefficient vectors of the two sides. The stored vector is the
/// conjugated coefficient: q[m] = sqrt(split[m]) * exp(-i*phase[m]), so the
/// per-element multiplier acting on the incident signal is conj(q[m]) and
/// cascade gains are |q^H h|^2 with h from CompositeChannels.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> coefficient_vectors(const StarRisProfile& p);

struct PowerAllocation {
    double ul = 0.0;  // uplink user transmit power, watts
    double dl = 0.0;  // BS downlink transmit power, watts
};

struct PowerModelParams {
    double circuit = 1.0;           // P_c, watts
    double per_element = 3.9810717055349722e-3;  // P_s, watts (6 dBm)
    double sic_circuit = 0.05;      // P_c0, watts
    double isolation = 0.1;         // xi
    double amp_efficiency = 0.8;    // rho in (0, 1]
};

struct NoiseParams {
    double ul = 1e-12;  // sigma_U^2, watts
    double dl = 1e-12;  // sigma_D^2, watts
};

struct RateConstraints {
    double ul_rate_min = 1.0;   // bps/Hz
    double dl_rate_min = 3.0;   // bps/Hz
    double ul_power_max = 0.1;  // watts (20 dBm)
    double dl_power_max = 1.0;  // watts (30 dBm)
};

/// Squared cascade gains for a fixed profile.
struct EffectiveGains {
    double ul_signal = 0.0;  // |q_r^H h_ul|^2
    double dl_signal = 0.0;  // |q_t^H h_dl|^2
    double cross = 0.0;      // |q_t^H h_cross|^2, uplink leakage into downlink
    double rsi = 0.0;        // |h_bb|^2
};

struct ConstraintSlack {
    std::string id;
    double slack = 0.0;  // >= 0 means satisfied
};

struct FeasibilityReport {
    double ul_rate = 0.0;
    double dl_rate = 0.0;
    double ee = 0.0;
    std::vector<ConstraintSlack> violations;  // entries with slack < -tolerance

    bool feasible() const { return violations.empty(); }
};

/// Terms of the sum-rate decomposition: rate = (ul_total - ul_floor) +
/// (dl_total - dl_floor), where the totals are the log of the full received
/// power and the floors the log of interference plus noise.
struct RateDecomposition {
    double ul_total = 0.0;
    double dl_total = 0.0;
    double ul_floor = 0.0;
    double dl_floor = 0.0;
};

EffectiveGains effective_gains(const StarRisProfile& p, const CompositeChannels& cc);

double rate_uplink(const PowerAllocation& p, const EffectiveGains& g, const NoiseParams& n);
double rate_downlink(const PowerAllocation& p, const EffectiveGains& g, const NoiseParams& n);

/// P_c + (p_ul + p_dl)/rho + M*P_s + xi*p_dl + P_c0.
double total_power(const PowerAllocation& p, int elements, const PowerModelParams& pm);

double energy_efficiency(const PowerAllocation& p, const StarRisProfile& profile,
                         const CompositeChannels& cc, const NoiseParams& n,
                         const PowerModelParams& pm);

RateDecomposition decomposed_sum_rate(const PowerAllocation& p, const EffectiveGains& g,
                                      const NoiseParams& n);

/// Evaluates all constraints of the joint problem; reports slack per
/// violated constraint. Slack below -1e-6 counts as a violation.
FeasibilityReport check_solution(const PowerAllocation& p, const StarRisProfile& profile,
                                 const CompositeChannels& cc, const NoiseParams& n,
                                 const RateConstraints& rc, const PowerModelParams& pm);

}  // namespace starfd

#endif
