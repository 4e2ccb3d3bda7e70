#pragma once

#include "ruenergy/config.hpp"
#include "ruenergy/dsp.hpp"
#include "ruenergy/rng.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ruenergy {

enum class WaveformKind { CpOfdm, DftsOfdm };

std::string_view to_string(WaveformKind k);

namespace waveform {

/// Gray-mapped square QAM, unit average power. Bits are consumed
/// log2(order) at a time; even positions drive I, odd positions drive Q.
/// Order 4 maps bits 00 to (1+j)/sqrt(2).
CVec qam_modulate(std::span<const std::uint8_t> bits, int order);

/// All `order` points of the normalized constellation, indexed by the
/// integer value of the bit label (first bit is the most significant).
CVec qam_constellation(int order);

int bits_per_symbol(int order);

/// Unitary M-point DFT (1/sqrt(M)), the spreading step of DFT-s-OFDM.
CVec dft_spread(std::span<const cplx> d);
/// Inverse of dft_spread.
CVec dft_despread(std::span<const cplx> s);

/// Active tone indices on the centered grid (DC at N/2).
///  - localized: one contiguous block [N/2 - M/2, N/2 - M/2 + M).
///  - split-localized: M/2 tones directly below DC and M/2 tones directly
///    above it; the DC tone stays empty. Requires even M and M + 1 <= N.
std::vector<std::size_t> tone_indices(std::size_t m, std::size_t n, ToneMapping scheme);

struct MappedGrid {
    CVec grid;                         // centered order, length N
    std::vector<std::size_t> indices;  // spread[i] sits at grid[indices[i]]
};

MappedGrid map_tones(std::span<const cplx> spread, std::size_t n, ToneMapping scheme);

/// Inverse unitary DFT of a centered grid, zero-padded to N * oversample.
/// Parseval holds: |x|^2 == |grid|^2.
CVec to_time_domain(std::span<const cplx> grid, int oversample = 1);

/// Forward unitary DFT returned on the centered grid. Inverse of
/// to_time_domain at oversample 1.
CVec to_frequency_domain(std::span<const cplx> x);

/// 10 log10(max|x|^2 / mean|x|^2).
double papr_db(std::span<const cplx> x);

struct FrameParams {
    std::size_t allocated_tones = 1200;
    std::size_t fft_size = 2048;
    int qam_order = 64;
    ToneMapping mapping = ToneMapping::SplitLocalized;
    int oversample = 1;

    static FrameParams from(const ScenarioConfig& cfg);
};

struct SymbolFrame {
    WaveformKind kind = WaveformKind::CpOfdm;
    CVec data_symbols;
    CVec spread_symbols;
    CVec grid;
    std::vector<std::size_t> mapping;
    CVec time_samples;
};

/// Shared transmit pipeline. CP-OFDM is the same chain with the spreading
/// DFT replaced by the identity.
SymbolFrame build_frame(const FrameParams& p, WaveformKind kind, std::span<const cplx> data_symbols);

/// Draws random bits from `rng` and builds a frame.
SymbolFrame random_frame(const FrameParams& p, WaveformKind kind, RngStream& rng);

/// PAPR of `symbols` independent random frames, one RNG stream per symbol.
std::vector<double> papr_samples(const FrameParams& p, WaveformKind kind, std::size_t symbols, std::uint64_t seed,
                                 int threads = 0);

/// Empirical complementary CDF quantile: the smallest threshold t with
/// P(PAPR > t) <= prob.
double ccdf_quantile(std::vector<double> samples, double prob);

} // namespace waveform
} // namespace ruenergy
