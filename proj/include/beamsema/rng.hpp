// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_RNG_HPP
#define BEAMSEMA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace beamsema {

// Mixing finalizer from splitmix64. Used to derive independent per-sample /
// per-purpose seeds from one experiment seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(base ^ mix64(a)) ^ mix64(b + 0x5851f42d4c957f2dULL));
}

// Seeded random stream with fixed-algorithm distributions.
//
// The engine sequence (mt19937_64) is pinned by the standard, but the
// std::*_distribution transforms are implementation-defined, so the handful
// of distributions needed here are spelled out explicitly. Datasets and
// training runs must be bit-reproducible from their seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = bits();
        } while (x >= limit);
        return x % n;
    }

    // Inclusive integer range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Box-Muller, one value per call (second value discarded to keep the
    // draw count independent of call history).
    double normal(double mean = 0.0, double sigma = 1.0) {
        const double u = 1.0 - uniform();  // (0, 1], keeps log finite
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        return mean + sigma * r * std::cos(6.283185307179586476925287 * v);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Fisher-Yates with the rejection sampler above; std::shuffle is
    // implementation-defined.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace beamsema

#endif
