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

#ifndef STARFD_CHANNEL_HPP
#define STARFD_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace starfd {

/// 2-D node placement in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

struct Geometry {
    Vec2 bs_pos{5.0, 45.0};
    Vec2 ris_pos{0.0, 50.0};
    Vec2 ul_pos{0.0, 35.0};
    Vec2 dl_pos{0.0, 100.0};
};

/// Large-scale and small-scale fading parameters. All values linear scale;
/// dB/dBm conversion happens once at configuration time.
struct ChannelParams {
    double pl0_db = -30.0;      // reference path loss at d0 = 1 m, in dB
    double exponent = 2.2;      // path-loss exponent
    double rician_k = 1.9952623149688795;  // linear (3 dB); +inf = pure LoS
    int num_elements = 50;      // surface element count M
    double sigma_si_sq = 1e-10; // residual self-interference channel variance
};

/// One realization of the five propagation channels. Vectors are stored as
/// columns; the conjugate transpose of `ris_to_bs` / `ris_to_dl` is what
/// multiplies from the left in the received-signal expressions.
struct ChannelSet {
    Eigen::VectorXcd ul_to_ris;   // uplink user -> surface
    Eigen::VectorXcd ris_to_bs;   // surface -> base station
    Eigen::VectorXcd bs_to_ris;   // base station -> surface
    Eigen::VectorXcd ris_to_dl;   // surface -> downlink user
    std::complex<double> rsi{0.0, 0.0};  // residual self-interference at BS
};

/// Element-wise cascaded channels. With coefficient vector q (see
/// system.hpp), q^H * ul equals ris_to_bs^H * Diag(conj(q)) * ul_to_ris.
struct CompositeChannels {
    Eigen::VectorXcd ul;     // Diag(ris_to_bs^H) * ul_to_ris
    Eigen::VectorXcd dl;     // Diag(ris_to_dl^H) * bs_to_ris
    Eigen::VectorXcd cross;  // Diag(ris_to_dl^H) * ul_to_ris
    std::complex<double> rsi{0.0, 0.0};
};

/// Linear power gain PL0 * (d/1m)^(-exponent). Throws std::domain_error for
/// non-positive distances.
double path_loss_gain(double d_meters, const ChannelParams& params);

/// Draws one Rician channel realization of all links. The surface is modeled
/// as a uniform linear array along the x axis with half-wavelength spacing;
/// the LoS component of each surface-side link is the corresponding steering
/// vector. Same seed => bit-identical result.
ChannelSet draw_channel_set(const Geometry& geom, const ChannelParams& params,
                            std::uint64_t seed);

/// Element-wise products of the surface-side links. Throws
/// std::invalid_argument on length mismatch.
CompositeChannels composite_channels(const ChannelSet& cs);

}  // namespace starfd

#endif
