#include "ruenergy/waveform.hpp"

#include "ruenergy/error.hpp"
#include "ruenergy/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ruenergy {

std::string_view to_string(WaveformKind k) { return k == WaveformKind::CpOfdm ? "CP-OFDM" : "DFT-s-OFDM"; }

namespace waveform {

namespace {

// Gray-coded amplitude level for one axis, 3GPP-style nesting:
// (1-2c0)(2^(k-1) - (1-2c1)(2^(k-2) - ... (1-2c_{k-1})))
double axis_level(const std::uint8_t* c, int k) {
    const auto sgn = [](std::uint8_t b) { return 1.0 - 2.0 * b; };
    if (k == 1) return sgn(c[0]);
    double inner = sgn(c[k - 1]);
    for (int i = k - 2; i >= 1; --i) inner = sgn(c[i]) * (std::ldexp(1.0, k - 1 - i) - inner);
    return sgn(c[0]) * (std::ldexp(1.0, k - 1) - inner);
}

} // namespace

int bits_per_symbol(int order) {
    switch (order) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 6;
    case 256: return 8;
    default: throw Error(ErrorCode::InvalidArgument, "unsupported QAM order " + std::to_string(order));
    }
}

CVec qam_modulate(std::span<const std::uint8_t> bits, int order) {
    const int q = bits_per_symbol(order);
    require(bits.size() % static_cast<std::size_t>(q) == 0, "bit count is not a multiple of log2(order)");
    const int k = q / 2;
    const double norm = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
    CVec out(bits.size() / q);
    std::uint8_t i_bits[4];
    std::uint8_t q_bits[4];
    for (std::size_t s = 0; s < out.size(); ++s) {
        const auto* b = bits.data() + s * q;
        for (int j = 0; j < k; ++j) {
            i_bits[j] = b[2 * j] & 1u;
            q_bits[j] = b[2 * j + 1] & 1u;
        }
        out[s] = cplx(axis_level(i_bits, k), axis_level(q_bits, k)) * norm;
    }
    return out;
}

CVec qam_constellation(int order) {
    const int q = bits_per_symbol(order);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(order) * q);
    for (int label = 0; label < order; ++label)
        for (int j = 0; j < q; ++j) bits[label * q + j] = (label >> (q - 1 - j)) & 1;
    return qam_modulate(bits, order);
}

CVec dft_spread(std::span<const cplx> d) { return dsp::dft_unitary(d); }

CVec dft_despread(std::span<const cplx> s) { return dsp::idft_unitary(s); }

std::vector<std::size_t> tone_indices(std::size_t m, std::size_t n, ToneMapping scheme) {
    require(m >= 1, "at least one allocated tone is required");
    std::vector<std::size_t> idx(m);
    if (scheme == ToneMapping::Localized) {
        require(m <= n, "allocated tones exceed the FFT size");
        const std::size_t first = n / 2 - m / 2;
        for (std::size_t i = 0; i < m; ++i) idx[i] = first + i;
    } else {
        require(m % 2 == 0, "split-localized mapping needs an even number of tones");
        require(m + 1 <= n, "allocated tones plus the DC tone exceed the FFT size");
        const std::size_t half = m / 2;
        const std::size_t dc = n / 2;
        for (std::size_t i = 0; i < half; ++i) {
            idx[i] = dc - half + i;
            idx[half + i] = dc + 1 + i;
        }
    }
    return idx;
}

MappedGrid map_tones(std::span<const cplx> spread, std::size_t n, ToneMapping scheme) {
    MappedGrid out;
    out.indices = tone_indices(spread.size(), n, scheme);
    out.grid.assign(n, cplx{});
    for (std::size_t i = 0; i < spread.size(); ++i) out.grid[out.indices[i]] = spread[i];
    return out;
}

CVec to_time_domain(std::span<const cplx> grid, int oversample) {
    require(oversample >= 1, "oversample must be >= 1");
    const std::size_t n = grid.size();
    const std::size_t len = n * static_cast<std::size_t>(oversample);
    // Embed the centered grid in the centered oversampled grid, then move to FFT order.
    const std::size_t offset = len / 2 - n / 2;
    CVec bins(len);
    for (std::size_t c = 0; c < n; ++c) bins[dsp::centered_to_bin(c + offset, len)] = grid[c];
    dsp::fft_inverse(bins);
    const double scale = 1.0 / std::sqrt(static_cast<double>(len));
    for (auto& v : bins) v *= scale;
    return bins;
}

CVec to_frequency_domain(std::span<const cplx> x) {
    const std::size_t n = x.size();
    CVec bins = dsp::dft_unitary(x);
    CVec grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[dsp::bin_to_centered(k, n)] = bins[k];
    return grid;
}

double papr_db(std::span<const cplx> x) {
    require(!x.empty(), "PAPR of an empty sequence");
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& v : x) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        sum += p;
    }
    require(sum > 0.0, "PAPR of an all-zero sequence");
    return 10.0 * std::log10(peak / (sum / static_cast<double>(x.size())));
}

FrameParams FrameParams::from(const ScenarioConfig& cfg) {
    FrameParams p;
    p.allocated_tones = static_cast<std::size_t>(cfg.waveform.allocated_tones);
    p.fft_size = static_cast<std::size_t>(cfg.waveform.fft_size);
    p.qam_order = cfg.waveform.modulation_order;
    p.mapping = cfg.waveform.mapping;
    p.oversample = cfg.waveform.oversample;
    return p;
}

SymbolFrame build_frame(const FrameParams& p, WaveformKind kind, std::span<const cplx> data_symbols) {
    require(data_symbols.size() == p.allocated_tones, "data symbol count does not match the allocation");
    SymbolFrame f;
    f.kind = kind;
    f.data_symbols.assign(data_symbols.begin(), data_symbols.end());
    f.spread_symbols = kind == WaveformKind::DftsOfdm ? dft_spread(f.data_symbols) : f.data_symbols;
    auto mapped = map_tones(f.spread_symbols, p.fft_size, p.mapping);
    f.grid = std::move(mapped.grid);
    f.mapping = std::move(mapped.indices);
    f.time_samples = to_time_domain(f.grid, p.oversample);
    return f;
}

SymbolFrame random_frame(const FrameParams& p, WaveformKind kind, RngStream& rng) {
    std::vector<std::uint8_t> bits(p.allocated_tones * static_cast<std::size_t>(bits_per_symbol(p.qam_order)));
    for (auto& b : bits) b = rng.bit();
    const CVec d = qam_modulate(bits, p.qam_order);
    return build_frame(p, kind, d);
}

std::vector<double> papr_samples(const FrameParams& p, WaveformKind kind, std::size_t symbols, std::uint64_t seed,
                                 int threads) {
    std::vector<double> out(symbols);
    parallel_for(symbols, threads, [&](std::size_t i) {
        RngStream rng(seed, i, StreamTag::Data);
        out[i] = papr_db(random_frame(p, kind, rng).time_samples);
    });
    return out;
}

double ccdf_quantile(std::vector<double> samples, double prob) {
    require(!samples.empty(), "CCDF of an empty sample set");
    require(prob > 0.0 && prob < 1.0, "CCDF probability must be in (0, 1)");
    std::sort(samples.begin(), samples.end());
    // Number of samples allowed strictly above the threshold.
    const auto allowed = static_cast<std::size_t>(std::floor(prob * static_cast<double>(samples.size())));
    return samples[samples.size() - 1 - std::min(allowed, samples.size() - 1)];
}

} // namespace waveform
} // namespace ruenergy
