#pragma once

#include "ruenergy/config.hpp"
#include "ruenergy/dsp.hpp"
#include "ruenergy/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ruenergy::channel {

/// Tapped-delay-line power-delay profile with delays normalized to the RMS
/// delay spread.
struct TdlProfile {
    std::vector<double> normalized_delays;
    std::vector<double> powers_db;

    bool operator==(const TdlProfile&) const = default;
};

/// Built-in 24-tap NLOS TDL-C table.
const TdlProfile& tdl_c();

/// CSV with a header row and columns (delay_ns_normalized, power_dB).
TdlProfile load_profile_csv(const std::string& path);

/// Profile selected by the config: the CSV named by channel.profile_file or
/// the built-in TDL-C table.
TdlProfile profile_for(const ScenarioConfig& cfg);

/// One SISO block-fading draw on the sample grid.
struct ChannelRealization {
    CVec taps;           // h[0..L-1]
    CVec freq_response;  // N-point DFT of the zero-padded taps, FFT bin order
};

/// Draws tap gains for `profile` scaled to `delay_spread_s`, delays rounded to
/// the nearest sample at `sample_rate_hz`. Taps that round to the same sample
/// add. Mean total power is 1. Throws when the longest delay does not fit in
/// `fft_size` samples.
ChannelRealization draw_tdl(const TdlProfile& profile, double delay_spread_s, double sample_rate_hz,
                            std::size_t fft_size, RngStream& rng);

/// Unit impulse: identity channel.
ChannelRealization identity_channel(std::size_t fft_size);

/// Circular convolution of x with the taps plus complex AWGN of variance
/// `noise_variance` per sample.
CVec apply_channel(std::span<const cplx> x, const ChannelRealization& ch, double noise_variance, RngStream& rng);

/// Noise-free circular convolution.
CVec circular_convolve(std::span<const cplx> x, std::span<const cplx> taps);

/// Frequency-flat Nr x Nt channel, row-major.
struct FlatMimo {
    int rows = 2;
    int cols = 2;
    CVec h;

    cplx at(int r, int c) const { return h[static_cast<std::size_t>(r * cols + c)]; }
};

/// i.i.d. unit-variance complex Gaussian entries.
FlatMimo draw_flat_mimo(int rows, int cols, RngStream& rng);

struct ChannelGains {
    double lambda0 = 0.0;    // largest eigenvalue of H^H H
    double lambda1 = 0.0;    // second eigenvalue
    double lambda_eff = 0.0; // best transmit antenna: max_j |h_j|^2

    bool operator==(const ChannelGains&) const = default;
};

/// Eigenvalues of H^H H (descending) and the best-column gain. H must have two columns.
ChannelGains channel_gains(const FlatMimo& h);

/// Per-eigenvalue median over `draws` flat 2x2 draws, or the first draw for
/// ChannelStats::Fixed.
ChannelGains channel_statistics(ChannelStats stats, int draws, std::uint64_t seed);

} // namespace ruenergy::channel
