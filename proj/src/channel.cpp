#include "ruenergy/channel.hpp"

#include "ruenergy/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ruenergy::channel {

const TdlProfile& tdl_c() {
    static const TdlProfile profile{
        {0.0,    0.2099, 0.2219, 0.2329, 0.2176, 0.6366, 0.6448, 0.6560, 0.6584, 0.7935, 0.8213, 0.9336,
         1.2285, 1.3083, 2.1704, 2.7105, 4.2589, 4.6003, 5.4902, 5.6077, 6.3065, 6.6374, 7.0427, 8.6523},
        {-4.4, -1.2,  -3.5,  -5.2,  -2.5,  0.0,   -2.2,  -3.9,  -7.4,  -7.1,  -10.7, -11.1,
         -5.1, -6.8,  -8.7,  -13.2, -13.9, -13.9, -15.8, -17.1, -16.0, -15.7, -21.6, -22.8},
    };
    return profile;
}

TdlProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("channel.profile_file", 0, "cannot open '" + path + "'");
    TdlProfile p;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.find_first_of("0123456789") != 0) continue; // header
        std::istringstream ss(line);
        double delay = 0.0;
        double power = 0.0;
        char comma = 0;
        if (!(ss >> delay >> comma >> power) || comma != ',')
            throw ConfigError("channel.profile_file", line_no, "expected 'delay,power_db'");
        p.normalized_delays.push_back(delay);
        p.powers_db.push_back(power);
    }
    if (p.normalized_delays.empty()) throw ConfigError("channel.profile_file", 0, "profile has no taps");
    return p;
}

TdlProfile profile_for(const ScenarioConfig& cfg) {
    return cfg.channel.profile_file.empty() ? tdl_c() : load_profile_csv(cfg.channel.profile_file);
}

ChannelRealization draw_tdl(const TdlProfile& profile, double delay_spread_s, double sample_rate_hz,
                            std::size_t fft_size, RngStream& rng) {
    require(delay_spread_s >= 0.0, "delay spread must be >= 0");
    require(sample_rate_hz > 0.0, "sample rate must be > 0");
    const std::size_t taps = profile.normalized_delays.size();
    require(taps == profile.powers_db.size() && taps > 0, "malformed power-delay profile");

    double total = 0.0;
    for (double p : profile.powers_db) total += std::pow(10.0, p / 10.0);

    std::vector<std::size_t> delay(taps);
    std::size_t max_delay = 0;
    for (std::size_t i = 0; i < taps; ++i) {
        delay[i] = static_cast<std::size_t>(std::llround(profile.normalized_delays[i] * delay_spread_s * sample_rate_hz));
        max_delay = std::max(max_delay, delay[i]);
    }
    if (max_delay >= fft_size)
        throw Error(ErrorCode::InvalidArgument, "channel delay of " + std::to_string(max_delay) +
                                                    " samples does not fit in " + std::to_string(fft_size));

    ChannelRealization ch;
    ch.taps.assign(max_delay + 1, cplx{});
    for (std::size_t i = 0; i < taps; ++i)
        ch.taps[delay[i]] += rng.complex_gaussian(std::pow(10.0, profile.powers_db[i] / 10.0) / total);

    ch.freq_response.assign(fft_size, cplx{});
    std::copy(ch.taps.begin(), ch.taps.end(), ch.freq_response.begin());
    dsp::fft_forward(ch.freq_response);
    return ch;
}

ChannelRealization identity_channel(std::size_t fft_size) {
    ChannelRealization ch;
    ch.taps = {cplx{1.0, 0.0}};
    ch.freq_response.assign(fft_size, cplx{1.0, 0.0});
    return ch;
}

CVec circular_convolve(std::span<const cplx> x, std::span<const cplx> taps) {
    const std::size_t n = x.size();
    require(taps.size() <= n, "impulse response longer than the signal");
    CVec y(n);
    if (taps.size() <= 16) {
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc{};
            for (std::size_t l = 0; l < taps.size(); ++l) acc += taps[l] * x[(k + n - l) % n];
            y[k] = acc;
        }
        return y;
    }
    CVec hf(n);
    std::copy(taps.begin(), taps.end(), hf.begin());
    dsp::fft_forward(hf);
    std::copy(x.begin(), x.end(), y.begin());
    dsp::fft_forward(y);
    for (std::size_t k = 0; k < n; ++k) y[k] *= hf[k] / static_cast<double>(n);
    dsp::fft_inverse(y);
    return y;
}

CVec apply_channel(std::span<const cplx> x, const ChannelRealization& ch, double noise_variance, RngStream& rng) {
    require(x.size() == ch.freq_response.size(), "signal length does not match the channel grid");
    require(noise_variance >= 0.0, "noise variance must be >= 0");
    CVec y = circular_convolve(x, ch.taps);
    if (noise_variance > 0.0)
        for (auto& v : y) v += rng.complex_gaussian(noise_variance);
    return y;
}

FlatMimo draw_flat_mimo(int rows, int cols, RngStream& rng) {
    FlatMimo m{rows, cols, CVec(static_cast<std::size_t>(rows * cols))};
    for (auto& v : m.h) v = rng.complex_gaussian(1.0);
    return m;
}

ChannelGains channel_gains(const FlatMimo& m) {
    require(m.cols == 2 && m.rows >= 1, "channel_gains expects two transmit antennas");
    for (const auto& v : m.h)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::InvalidArgument, "channel matrix has non-finite entries");

    // Gram matrix G = H^H H is 2x2 Hermitian.
    double g00 = 0.0;
    double g11 = 0.0;
    cplx g01{};
    for (int r = 0; r < m.rows; ++r) {
        g00 += std::norm(m.at(r, 0));
        g11 += std::norm(m.at(r, 1));
        g01 += std::conj(m.at(r, 0)) * m.at(r, 1);
    }
    const double half_trace = 0.5 * (g00 + g11);
    const double half_diff = 0.5 * (g00 - g11);
    const double radius = std::sqrt(half_diff * half_diff + std::norm(g01));
    ChannelGains out;
    out.lambda0 = half_trace + radius;
    out.lambda1 = std::max(0.0, half_trace - radius);
    out.lambda_eff = std::max(g00, g11);
    return out;
}

ChannelGains channel_statistics(ChannelStats stats, int draws, std::uint64_t seed) {
    require(draws >= 1, "at least one channel draw is required");
    if (stats == ChannelStats::Fixed) {
        RngStream rng(seed, 0, StreamTag::Mimo);
        return channel_gains(draw_flat_mimo(2, 2, rng));
    }
    std::vector<double> l0(draws), l1(draws), le(draws);
    for (int i = 0; i < draws; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i), StreamTag::Mimo);
        const auto g = channel_gains(draw_flat_mimo(2, 2, rng));
        l0[i] = g.lambda0;
        l1[i] = g.lambda1;
        le[i] = g.lambda_eff;
    }
    const auto median = [](std::vector<double> v) {
        const auto mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        if (v.size() % 2) return v[mid];
        const double upper = v[mid];
        const double lower = *std::max_element(v.begin(), v.begin() + mid);
        return 0.5 * (lower + upper);
    };
    return {median(l0), median(l1), median(le)};
}

} // namespace ruenergy::channel
