#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ruenergy {

/// Sub-stream tags. A trial owns one independent stream per tag.
enum class StreamTag : std::uint32_t {
    Data = 1,
    Channel = 2,
    Noise = 3,
    Mimo = 4,
};

/// Deterministic random stream keyed by (seed, index, tag). Two streams built
/// from the same key produce identical sequences, independent of scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t index, StreamTag tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(tag)};
        engine_.seed(seq);
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance = 1.0) {
        const double sigma = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {sigma * re, sigma * im};
    }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() & 1u); }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace ruenergy
