// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_ARRAY_CHANNEL_HPP
#define BEAMSEMA_ARRAY_CHANNEL_HPP

#include <complex>
#include <vector>

#include "beamsema/rng.hpp"

namespace beamsema {

using cdouble = std::complex<double>;

// ULA / codebook / channel configuration. Defaults follow a 16-element array
// with an oversampled 64-beam codebook, narrowband (K = 1).
struct ChannelConfig {
    int num_antennas = 16;       // M
    int num_beams = 64;          // Q, oversampled: Q >= M
    int num_subcarriers = 1;     // K
    int cyclic_prefix = 0;       // D; admissible max path delay when K > 1
    double snr_db = 0.0;         // transmit SNR = P / sigma^2, in dB
    double antenna_spacing = 0.5;  // element spacing in wavelengths
    int num_nlos_paths = 0;
    double nlos_gain_db = -15.0;   // per-path gain relative to LOS
    double coverage_deg = 60.0;    // codebook spans sin(theta) in [-sin(c), +sin(c)]

    // Throws std::invalid_argument on violated invariants.
    void validate() const;

    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
};

// Per-element response of the ULA to a plane wave; entry_0 = 1, |entry_m| = 1.
struct SteeringVector {
    std::vector<cdouble> entries;
};

// Q unit-norm beams ordered by increasing main-lobe azimuth.
struct Codebook {
    std::vector<std::vector<cdouble>> beams;
    std::vector<double> azimuths;  // main-lobe azimuth per beam, radians, ascending

    int num_beams() const { return static_cast<int>(beams.size()); }
    int num_antennas() const { return beams.empty() ? 0 : static_cast<int>(beams[0].size()); }
};

// K x M per-subcarrier channel rows.
struct ChannelMatrix {
    std::vector<std::vector<cdouble>> rows;

    int num_subcarriers() const { return static_cast<int>(rows.size()); }
    int num_antennas() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

// a_m = exp(i * 2*pi * spacing * m * sin(azimuth)), m = 0..M-1.
// azimuth must lie in the open interval (-pi/2, pi/2).
SteeringVector steering_vector(double azimuth_rad, int num_antennas, double spacing_wavelengths);

// Beam q is the normalized conjugate steering vector at azimuth theta_q, with
// sin(theta_q) on a uniform Q-point grid over [-sin(c), +sin(c)].
Codebook build_codebook(const ChannelConfig& cfg);

// Geometric channel: LOS path at user_azimuth with amplitude 1/range and a
// random phase, plus cfg.num_nlos_paths random-azimuth paths attenuated by
// nlos_gain_db. For K > 1 each path applies a per-subcarrier phase ramp from
// its (integer) delay, which is < cyclic_prefix.
ChannelMatrix synth_channel(double user_azimuth_rad, double user_range_m,
                            const ChannelConfig& cfg, Rng& rng);

// (1/K) * sum_k SNR * |h_k^T f|^2. Transpose product, not Hermitian: beams are
// conjugate steering vectors, so h^T f peaks at the beam azimuth.
double receive_snr(const ChannelMatrix& h, const std::vector<cdouble>& beam,
                   const ChannelConfig& cfg);

// argmax_q receive_snr(h, f_q); ties break toward the smallest index.
int optimal_beam(const ChannelMatrix& h, const Codebook& cb, const ChannelConfig& cfg);

}  // namespace beamsema

#endif
