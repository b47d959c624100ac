// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/array_channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beamsema {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

void ChannelConfig::validate() const {
    if (num_antennas < 1)
        throw std::invalid_argument("ChannelConfig: num_antennas must be >= 1");
    if (num_beams < num_antennas)
        throw std::invalid_argument("ChannelConfig: num_beams must be >= num_antennas (oversampled)");
    if (num_subcarriers < 1)
        throw std::invalid_argument("ChannelConfig: num_subcarriers must be >= 1");
    if (cyclic_prefix < 0)
        throw std::invalid_argument("ChannelConfig: cyclic_prefix must be >= 0");
    if (num_nlos_paths < 0)
        throw std::invalid_argument("ChannelConfig: num_nlos_paths must be >= 0");
    if (!(coverage_deg > 0.0) || !(coverage_deg < 90.0))
        throw std::invalid_argument("ChannelConfig: coverage_deg must lie in (0, 90)");
    if (!(antenna_spacing > 0.0))
        throw std::invalid_argument("ChannelConfig: antenna_spacing must be > 0");
}

SteeringVector steering_vector(double azimuth_rad, int num_antennas, double spacing_wavelengths) {
    if (num_antennas < 1)
        throw std::invalid_argument("steering_vector: num_antennas must be >= 1");
    if (!(azimuth_rad > -kPi / 2.0 && azimuth_rad < kPi / 2.0))
        throw std::invalid_argument("steering_vector: azimuth must lie in (-pi/2, pi/2)");

    SteeringVector a;
    a.entries.resize(static_cast<std::size_t>(num_antennas));
    const double phase_step = kTwoPi * spacing_wavelengths * std::sin(azimuth_rad);
    for (int m = 0; m < num_antennas; ++m)
        a.entries[static_cast<std::size_t>(m)] = std::polar(1.0, phase_step * m);
    return a;
}

Codebook build_codebook(const ChannelConfig& cfg) {
    cfg.validate();

    const int q_total = cfg.num_beams;
    const int m_total = cfg.num_antennas;
    const double sin_max = std::sin(cfg.coverage_deg * kPi / 180.0);
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m_total));

    Codebook cb;
    cb.beams.resize(static_cast<std::size_t>(q_total));
    cb.azimuths.resize(static_cast<std::size_t>(q_total));
    for (int q = 0; q < q_total; ++q) {
        const double s = (q_total == 1)
                             ? 0.0
                             : -sin_max + 2.0 * sin_max * q / (q_total - 1);
        const double theta = std::asin(s);
        const SteeringVector a = steering_vector(theta, m_total, cfg.antenna_spacing);
        std::vector<cdouble> beam(static_cast<std::size_t>(m_total));
        for (int m = 0; m < m_total; ++m)
            beam[static_cast<std::size_t>(m)] = std::conj(a.entries[static_cast<std::size_t>(m)]) * inv_sqrt_m;
        cb.beams[static_cast<std::size_t>(q)] = std::move(beam);
        cb.azimuths[static_cast<std::size_t>(q)] = theta;
    }
    return cb;
}

ChannelMatrix synth_channel(double user_azimuth_rad, double user_range_m,
                            const ChannelConfig& cfg, Rng& rng) {
    cfg.validate();
    if (!(user_range_m > 0.0))
        throw std::invalid_argument("synth_channel: user_range must be > 0");

    const int k_total = cfg.num_subcarriers;
    const int m_total = cfg.num_antennas;
    const double cov_rad = cfg.coverage_deg * kPi / 180.0;

    struct Path {
        double azimuth;
        double amplitude;
        double phase;
        int delay;
    };

    std::vector<Path> paths;
    paths.reserve(static_cast<std::size_t>(1 + cfg.num_nlos_paths));
    const double los_amp = 1.0 / user_range_m;
    paths.push_back({user_azimuth_rad, los_amp, rng.uniform(0.0, kTwoPi), 0});

    const double nlos_amp = los_amp * std::pow(10.0, cfg.nlos_gain_db / 20.0);
    const int max_delay = (k_total > 1 && cfg.cyclic_prefix > 0) ? cfg.cyclic_prefix : 1;
    for (int p = 0; p < cfg.num_nlos_paths; ++p) {
        const double az = rng.uniform(-cov_rad, cov_rad);
        const double phase = rng.uniform(0.0, kTwoPi);
        const int delay = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_delay)));
        paths.push_back({az, nlos_amp, phase, delay});
    }

    ChannelMatrix h;
    h.rows.assign(static_cast<std::size_t>(k_total),
                  std::vector<cdouble>(static_cast<std::size_t>(m_total), cdouble(0.0, 0.0)));
    for (const Path& path : paths) {
        if (path.amplitude == 0.0) continue;
        const SteeringVector a = steering_vector(path.azimuth, m_total, cfg.antenna_spacing);
        const cdouble gain = std::polar(path.amplitude, path.phase);
        for (int k = 0; k < k_total; ++k) {
            // OFDM frequency response of an integer-sample delay.
            const cdouble tone = std::polar(1.0, -kTwoPi * k * path.delay / k_total);
            const cdouble g = gain * tone;
            for (int m = 0; m < m_total; ++m)
                h.rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] +=
                    g * a.entries[static_cast<std::size_t>(m)];
        }
    }
    return h;
}

double receive_snr(const ChannelMatrix& h, const std::vector<cdouble>& beam,
                   const ChannelConfig& cfg) {
    if (h.rows.empty())
        throw std::invalid_argument("receive_snr: channel has no subcarriers");
    if (h.num_antennas() != static_cast<int>(beam.size()))
        throw std::invalid_argument("receive_snr: channel has " + std::to_string(h.num_antennas()) +
                                    " antennas but beam has " + std::to_string(beam.size()));

    const double snr = cfg.snr_linear();
    const int k_total = h.num_subcarriers();
    double acc = 0.0;
    for (int k = 0; k < k_total; ++k) {
        cdouble dot(0.0, 0.0);
        const auto& row = h.rows[static_cast<std::size_t>(k)];
        for (std::size_t m = 0; m < beam.size(); ++m) dot += row[m] * beam[m];
        acc += snr * std::norm(dot);
    }
    return acc / k_total;
}

int optimal_beam(const ChannelMatrix& h, const Codebook& cb, const ChannelConfig& cfg) {
    if (cb.beams.empty())
        throw std::invalid_argument("optimal_beam: codebook is empty");

    int best = 0;
    double best_snr = -1.0;
    for (int q = 0; q < cb.num_beams(); ++q) {
        const double v = receive_snr(h, cb.beams[static_cast<std::size_t>(q)], cfg);
        if (v > best_snr) {  // strict: ties keep the smallest index
            best_snr = v;
            best = q;
        }
    }
    return best;
}

}  // namespace beamsema
