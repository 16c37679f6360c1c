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

#include "starfd/channel.hpp"

#include <numbers>
#include <stdexcept>

#include "starfd/rng.hpp"

namespace starfd {

double path_loss_gain(double d_meters, const ChannelParams& params) {
    if (!(d_meters > 0.0)) {
        throw std::domain_error("path_loss_gain: distance must be positive");
    }
    const double pl0 = std::pow(10.0, params.pl0_db / 10.0);
    return pl0 * std::pow(d_meters, -params.exponent);
}

namespace {

// Steering vector of a half-wavelength ULA along +x, toward `to` as seen
// from `from`. Only the relative phase ramp matters downstream.
Eigen::VectorXcd steering(const Vec2& from, const Vec2& to, int m) {
    const double d = distance(from, to);
    const double cos_axis = (to.x - from.x) / d;
    Eigen::VectorXcd a(m);
    for (int i = 0; i < m; ++i) {
        const double phase = std::numbers::pi * static_cast<double>(i) * cos_axis;
        a[i] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

// Rician draw: sqrt(PL) * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * CN(0,1)).
Eigen::VectorXcd rician(double gain, double k, const Eigen::VectorXcd& los, Rng& rng) {
    const int m = static_cast<int>(los.size());
    double w_los = 1.0;
    double w_nlos = 0.0;
    if (!std::isinf(k)) {
        w_los = std::sqrt(k / (k + 1.0));
        w_nlos = std::sqrt(1.0 / (k + 1.0));
    }
    const double amp = std::sqrt(gain);
    Eigen::VectorXcd h(m);
    for (int i = 0; i < m; ++i) {
        h[i] = amp * (w_los * los[i] + w_nlos * rng.cgauss());
    }
    return h;
}

}  // namespace

ChannelSet draw_channel_set(const Geometry& geom, const ChannelParams& params,
                            std::uint64_t seed) {
    if (params.num_elements < 1) {
        throw std::invalid_argument("draw_channel_set: need at least one element");
    }
    if (!(params.exponent > 0.0) || params.rician_k < 0.0 || params.sigma_si_sq < 0.0) {
        throw std::invalid_argument("draw_channel_set: invalid channel parameters");
    }
    const int m = params.num_elements;
    const double g_ul = path_loss_gain(distance(geom.ul_pos, geom.ris_pos), params);
    const double g_bs = path_loss_gain(distance(geom.bs_pos, geom.ris_pos), params);
    const double g_dl = path_loss_gain(distance(geom.dl_pos, geom.ris_pos), params);

    Rng rng(seed);
    ChannelSet cs;
    // Draw order is part of the reproducibility contract; do not reorder.
    cs.ul_to_ris = rician(g_ul, params.rician_k, steering(geom.ris_pos, geom.ul_pos, m), rng);
    cs.ris_to_bs = rician(g_bs, params.rician_k, steering(geom.ris_pos, geom.bs_pos, m), rng);
    cs.bs_to_ris = rician(g_bs, params.rician_k, steering(geom.ris_pos, geom.bs_pos, m), rng);
    cs.ris_to_dl = rician(g_dl, params.rician_k, steering(geom.ris_pos, geom.dl_pos, m), rng);
    cs.rsi = std::sqrt(params.sigma_si_sq) * rng.cgauss();
    return cs;
}

CompositeChannels composite_channels(const ChannelSet& cs) {
    const auto m = cs.ul_to_ris.size();
    if (cs.ris_to_bs.size() != m || cs.bs_to_ris.size() != m || cs.ris_to_dl.size() != m) {
        throw std::invalid_argument("composite_channels: channel length mismatch");
    }
    CompositeChannels cc;
    cc.ul = cs.ris_to_bs.conjugate().cwiseProduct(cs.ul_to_ris);
    cc.dl = cs.ris_to_dl.conjugate().cwiseProduct(cs.bs_to_ris);
    cc.cross = cs.ris_to_dl.conjugate().cwiseProduct(cs.ul_to_ris);
    cc.rsi = cs.rsi;
    return cc;
}

}  // namespace starfd
