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

#include "starfd/system.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starfd {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSlackTolerance = 1e-6;

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}
}  // namespace

StarRisProfile make_profile(const Eigen::VectorXd& transmit_split,
                            const Eigen::VectorXd& transmit_phase,
                            const Eigen::VectorXd& reflect_phase) {
    const Eigen::Index m = transmit_split.size();
    if (transmit_phase.size() != m || reflect_phase.size() != m) {
        throw std::invalid_argument("make_profile: vector length mismatch");
    }
    StarRisProfile p;
    p.transmit_split = transmit_split.cwiseMax(0.0).cwiseMin(1.0);
    p.reflect_split = Eigen::VectorXd::Ones(m) - p.transmit_split;
    p.transmit_phase = transmit_phase.unaryExpr([](double v) { return wrap_phase(v); });
    p.reflect_phase = reflect_phase.unaryExpr([](double v) { return wrap_phase(v); });
    return p;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> coefficient_vectors(const StarRisProfile& p) {
    const Eigen::Index m = p.elements();
    Eigen::VectorXcd qt(m);
    Eigen::VectorXcd qr(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double at = std::sqrt(p.transmit_split[i]);
        const double ar = std::sqrt(p.reflect_split[i]);
        qt[i] = std::polar(at, -p.transmit_phase[i]);
        qr[i] = std::polar(ar, -p.reflect_phase[i]);
    }
    return {qt, qr};
}

EffectiveGains effective_gains(const StarRisProfile& p, const CompositeChannels& cc) {
    if (p.elements() != cc.ul.size()) {
        throw std::invalid_argument("effective_gains: profile/channel size mismatch");
    }
    const auto [qt, qr] = coefficient_vectors(p);
    EffectiveGains g;
    g.ul_signal = std::norm(qr.dot(cc.ul));     // dot() conjugates the left side
    g.dl_signal = std::norm(qt.dot(cc.dl));
    g.cross = std::norm(qt.dot(cc.cross));
    g.rsi = std::norm(cc.rsi);
    return g;
}

double rate_uplink(const PowerAllocation& p, const EffectiveGains& g, const NoiseParams& n) {
    return std::log2(1.0 + p.ul * g.ul_signal / (p.dl * g.rsi + n.ul));
}

double rate_downlink(const PowerAllocation& p, const EffectiveGains& g, const NoiseParams& n) {
    return std::log2(1.0 + p.dl * g.dl_signal / (p.ul * g.cross + n.dl));
}

double total_power(const PowerAllocation& p, int elements, const PowerModelParams& pm) {
    return pm.circuit + (p.ul + p.dl) / pm.amp_efficiency +
           static_cast<double>(elements) * pm.per_element + pm.isolation * p.dl +
           pm.sic_circuit;
}

double energy_efficiency(const PowerAllocation& p, const StarRisProfile& profile,
                         const CompositeChannels& cc, const NoiseParams& n,
                         const PowerModelParams& pm) {
    const EffectiveGains g = effective_gains(profile, cc);
    const double rate = rate_uplink(p, g, n) + rate_downlink(p, g, n);
    return rate / total_power(p, static_cast<int>(profile.elements()), pm);
}

RateDecomposition decomposed_sum_rate(const PowerAllocation& p, const EffectiveGains& g,
                                      const NoiseParams& n) {
    RateDecomposition d;
    d.ul_total = std::log2(p.dl * g.rsi + n.ul + p.ul * g.ul_signal);
    d.dl_total = std::log2(p.ul * g.cross + n.dl + p.dl * g.dl_signal);
    d.ul_floor = std::log2(p.dl * g.rsi + n.ul);
    d.dl_floor = std::log2(p.ul * g.cross + n.dl);
    return d;
}

FeasibilityReport check_solution(const PowerAllocation& p, const StarRisProfile& profile,
                                 const CompositeChannels& cc, const NoiseParams& n,
                                 const RateConstraints& rc, const PowerModelParams& pm) {
    FeasibilityReport rep;
    const EffectiveGains g = effective_gains(profile, cc);
    rep.ul_rate = rate_uplink(p, g, n);
    rep.dl_rate = rate_downlink(p, g, n);
    rep.ee = (rep.ul_rate + rep.dl_rate) /
             total_power(p, static_cast<int>(profile.elements()), pm);

    auto probe = [&rep](const std::string& id, double slack) {
        if (slack < -kSlackTolerance) rep.violations.push_back({id, slack});
    };
    probe("ul_rate_min", rep.ul_rate - rc.ul_rate_min);
    probe("dl_rate_min", rep.dl_rate - rc.dl_rate_min);
    probe("ul_power_lo", p.ul);
    probe("ul_power_hi", rc.ul_power_max - p.ul);
    probe("dl_power_lo", p.dl);
    probe("dl_power_hi", rc.dl_power_max - p.dl);
    for (Eigen::Index i = 0; i < profile.elements(); ++i) {
        const double bt = profile.transmit_split[i];
        const double br = profile.reflect_split[i];
        probe("split_sum[" + std::to_string(i) + "]", -std::abs(bt + br - 1.0));
        probe("split_lo[" + std::to_string(i) + "]", std::min(bt, br));
        probe("split_hi[" + std::to_string(i) + "]", 1.0 - std::max(bt, br));
    }
    return rep;
}

}  // namespace starfd
