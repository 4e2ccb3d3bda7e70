#include "ruenergy/channel.hpp"
#include "ruenergy/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ruenergy;
using namespace ruenergy::channel;

namespace {

CVec random_vec(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0, StreamTag::Data);
    CVec v(n);
    for (auto& x : v) x = rng.complex_gaussian(1.0);
    return v;
}

} // namespace

TEST_SUITE("channel") {

TEST_CASE("TDL mean power is one") {
    double total = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(3, i, StreamTag::Channel);
        total += dsp::energy(draw_tdl(tdl_c(), 300e-9, 30.72e6, 2048, rng).taps);
    }
    CHECK(std::abs(total / draws - 1.0) < 0.02);
}

TEST_CASE("zero delay spread gives a single flat tap") {
    RngStream rng(1, 0, StreamTag::Channel);
    const auto ch = draw_tdl(tdl_c(), 0.0, 30.72e6, 64, rng);
    REQUIRE(ch.taps.size() == 1);
    for (const auto& h : ch.freq_response) CHECK(std::abs(h - ch.taps[0]) < 1e-12);
}

TEST_CASE("draws are reproducible per stream") {
    RngStream a(5, 2, StreamTag::Channel), b(5, 2, StreamTag::Channel), c(5, 3, StreamTag::Channel);
    const auto ha = draw_tdl(tdl_c(), 300e-9, 30.72e6, 256, a);
    CHECK(ha.taps == draw_tdl(tdl_c(), 300e-9, 30.72e6, 256, b).taps);
    CHECK(ha.taps != draw_tdl(tdl_c(), 300e-9, 30.72e6, 256, c).taps);
}

TEST_CASE("tap delays follow the profile") {
    RngStream rng(1, 0, StreamTag::Channel);
    // 8.6523 * 300 ns * 30.72 MHz = 79.7 samples.
    CHECK(draw_tdl(tdl_c(), 300e-9, 30.72e6, 2048, rng).taps.size() == 81);
    CHECK_THROWS_AS(draw_tdl(tdl_c(), 300e-9, 30.72e6, 64, rng), Error);
    CHECK_THROWS_AS(draw_tdl(tdl_c(), -1.0, 30.72e6, 64, rng), Error);
}

TEST_CASE("identity channel is transparent") {
    const auto x = random_vec(128, 1);
    RngStream rng(1, 0, StreamTag::Noise);
    const auto ch = identity_channel(128);
    CHECK(apply_channel(x, ch, 0.0, rng) == x);
}

TEST_CASE("a pure tone is an eigenvector of the channel") {
    const std::size_t n = 64;
    RngStream rng(2, 0, StreamTag::Channel);
    const auto ch = draw_tdl(tdl_c(), 100e-9, 30.72e6, n, rng);
    const std::size_t k = 9;
    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::polar(1.0, 2.0 * std::numbers::pi * double(k * i) / double(n));
    const auto y = circular_convolve(x, ch.taps);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - ch.freq_response[k] * x[i]) < 1e-12);
}

TEST_CASE("circular convolution matches the dense circulant") {
    const std::size_t n = 32;
    for (std::size_t taps : {5u, 20u}) {
        const auto h = random_vec(taps, 10 + taps);
        const auto x = random_vec(n, 20 + taps);
        const auto y = circular_convolve(x, h);
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < n; ++c) {
                const std::size_t l = (r + n - c) % n;
                if (l < taps) acc += h[l] * x[c];
            }
            CHECK(std::abs(y[r] - acc) < 1e-12);
        }
    }
    CHECK_THROWS_AS(circular_convolve(random_vec(4, 1), random_vec(5, 2)), Error);
}

TEST_CASE("the DFT diagonalizes the channel") {
    const std::size_t n = 64;
    RngStream rng(4, 0, StreamTag::Channel);
    const auto ch = draw_tdl(tdl_c(), 200e-9, 30.72e6, n, rng);
    const auto x = random_vec(n, 3);
    auto y = circular_convolve(x, ch.taps);
    auto xf = x;
    dsp::fft_forward(xf);
    dsp::fft_forward(y);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ch.freq_response[k] * xf[k]) < 1e-10);
}

TEST_CASE("noise variance") {
    const std::size_t n = 1 << 18;
    RngStream rng(9, 0, StreamTag::Noise);
    const auto y = apply_channel(CVec(n), identity_channel(n), 0.25, rng);
    CHECK(std::abs(dsp::mean_power(y) / 0.25 - 1.0) < 0.01);
    CHECK_THROWS_AS(apply_channel(CVec(n), identity_channel(n), -1.0, rng), Error);
    CHECK_THROWS_AS(apply_channel(CVec(8), identity_channel(16), 0.0, rng), Error);
}

TEST_CASE("eigenvalues of H^H H") {
    FlatMimo eye{2, 2, {1.0, 0.0, 0.0, 1.0}};
    auto g = channel_gains(eye);
    CHECK(g.lambda0 == doctest::Approx(1.0));
    CHECK(g.lambda1 == doctest::Approx(1.0));
    CHECK(g.lambda_eff == doctest::Approx(1.0));

    FlatMimo rank1{2, 2, {1.0, 1.0, 1.0, 1.0}};
    g = channel_gains(rank1);
    CHECK(g.lambda0 == doctest::Approx(4.0));
    CHECK(g.lambda1 == doctest::Approx(0.0));
    CHECK(g.lambda_eff == doctest::Approx(2.0));

    FlatMimo diag{2, 2, {2.0, 0.0, 0.0, cplx(0.0, 0.5)}};
    g = channel_gains(diag);
    CHECK(g.lambda0 == doctest::Approx(4.0));
    CHECK(g.lambda1 == doctest::Approx(0.25));
    CHECK(g.lambda_eff == doctest::Approx(4.0));

    for (int i = 0; i < 200; ++i) {
        RngStream rng(11, i, StreamTag::Mimo);
        const auto h = draw_flat_mimo(2, 2, rng);
        g = channel_gains(h);
        CHECK(g.lambda_eff <= g.lambda0 * (1 + 1e-12));
        CHECK(g.lambda1 <= g.lambda0);
        double fro = 0.0;
        for (const auto& v : h.h) fro += std::norm(v);
        CHECK(g.lambda0 + g.lambda1 == doctest::Approx(fro));
    }

    FlatMimo bad{2, 2, {std::nan(""), 0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(channel_gains(bad), Error);
    FlatMimo three{2, 3, CVec(6, 1.0)};
    CHECK_THROWS_AS(channel_gains(three), Error);
}

TEST_CASE("channel statistics") {
    const auto m = channel_statistics(ChannelStats::Median, 1000, 1);
    CHECK(m == channel_statistics(ChannelStats::Median, 1000, 1));
    CHECK(m.lambda0 > m.lambda_eff);
    CHECK(m.lambda_eff > m.lambda1);
    RngStream rng(1, 0, StreamTag::Mimo);
    CHECK(channel_statistics(ChannelStats::Fixed, 1000, 1) == channel_gains(draw_flat_mimo(2, 2, rng)));
    CHECK_THROWS_AS(channel_statistics(ChannelStats::Median, 0, 1), Error);
}

TEST_CASE("bundled CSV equals the built-in table") {
    CHECK(load_profile_csv(std::string(RUENERGY_SOURCE_DIR) + "/data/tdl_c.csv") == tdl_c());
    CHECK(tdl_c().normalized_delays.size() == 24);
    CHECK_THROWS_AS(load_profile_csv("/nonexistent/profile.csv"), ConfigError);
}

}
