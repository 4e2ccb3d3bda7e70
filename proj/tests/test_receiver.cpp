#include "oracles/dense.hpp"

#include "ruenergy/error.hpp"
#include "ruenergy/receiver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ruenergy;
using namespace ruenergy::receiver;

namespace {

LinkSetup default_setup() { return LinkSetup::from(default_scenario()); }

LinkSetup toy_setup(ChannelKind kind, double snr_db) {
    LinkSetup s = default_setup();
    s.frame.allocated_tones = 32;
    s.frame.fft_size = 64;
    s.sample_rate_hz = 64 * 15e3;
    s.channel = kind;
    s.snr_db = snr_db;
    return s;
}

double evm_db(std::span<const cplx> est, std::span<const cplx> ref) {
    double e = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) e += std::norm(est[i] - ref[i]);
    return 10.0 * std::log10(e / dsp::energy(ref));
}

} // namespace

TEST_SUITE("receiver") {

TEST_CASE("MMSE limits") {
    const CVec h = {cplx(2.0, 1.0), cplx(0.0, -0.5), 0.0};
    const CVec y = {cplx(1.0, 1.0), cplx(3.0, 0.0), cplx(1.0, 0.0)};
    const auto zf = mmse_equalize(y, h, 0.0);
    CHECK(std::abs(zf[0] - y[0] / h[0]) < 1e-15);
    CHECK(std::abs(zf[1] - y[1] / h[1]) < 1e-15);
    CHECK(zf[2] == cplx{});
    const CVec flat(4, 1.0);
    for (const auto& v : mmse_equalize(flat, flat, 1.0)) CHECK(std::abs(v - 0.5) < 1e-15);
    CHECK_THROWS_AS(mmse_equalize(flat, h, 0.0), Error);
    CHECK_THROWS_AS(mmse_equalize(flat, flat, -1.0), Error);
}

TEST_CASE("despread") {
    const CVec grid = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const std::vector<std::size_t> map = {1, 2, 4, 5};
    CHECK(despread(grid, map, WaveformKind::CpOfdm) == CVec{2.0, 3.0, 5.0, 6.0});
    const auto d = despread(grid, map, WaveformKind::DftsOfdm);
    const auto back = waveform::dft_spread(d);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(back[i] - grid[map[i]]) < 1e-12);
    const std::vector<std::size_t> bad = {1, 9};
    CHECK_THROWS_AS(despread(grid, bad, WaveformKind::CpOfdm), Error);
    CHECK_THROWS_AS(despread(grid, {}, WaveformKind::CpOfdm), Error);
}

TEST_CASE("near-linear noiseless link recovers the data") {
    auto s = default_setup();
    s.channel = ChannelKind::Identity;
    s.noiseless = true;
    for (auto kind : {WaveformKind::CpOfdm, WaveformKind::DftsOfdm}) {
        const auto t = simulate_trial(s, kind, 40.0, 0, 5);
        CHECK(evm_db(detect(t, kind), t.data) < -80.0);
        const auto t30 = simulate_trial(s, kind, 30.0, 0, 5);
        CHECK(evm_db(detect(t30, kind), t30.data) < -60.0);
    }
}

TEST_CASE("noise variance follows the link SNR") {
    auto s = default_setup();
    const auto t = simulate_trial(s, WaveformKind::CpOfdm, 6.0, 0, 1);
    CHECK(t.noise_variance == doctest::Approx(dsp::mean_power(t.pa_out) * 1e-4));
    CHECK(t.rx_grid.size() == 2048);
    CHECK(t.h_eff.size() == 2048);
}

TEST_CASE("a common transmit phase is equalized away") {
    for (bool noiseless : {true, false}) {
        auto s = default_setup();
        s.noiseless = noiseless;
        auto r = s;
        r.tx_phase_rad = std::numbers::pi / 7.0;
        for (auto kind : {WaveformKind::CpOfdm, WaveformKind::DftsOfdm}) {
            if (noiseless) {
                const auto a = simulate_trial(s, kind, 5.0, 3, 2);
                const auto b = simulate_trial(r, kind, 5.0, 3, 2);
                const auto da = detect(a, kind);
                const auto db = detect(b, kind);
                for (std::size_t i = 0; i < da.size(); ++i) CHECK(std::abs(da[i] - db[i]) < 1e-9);
            } else {
                const double ea = measure_evm(s, kind, 5.0, 50, 2).evm_db;
                const double eb = measure_evm(r, kind, 5.0, 50, 2).evm_db;
                CHECK(std::abs(ea - eb) < 0.1);
            }
        }
    }
}

TEST_CASE("results do not depend on the thread count") {
    const auto s = default_setup();
    const auto one = measure_evm(s, WaveformKind::DftsOfdm, 4.0, 24, 9, 1);
    const auto many = measure_evm(s, WaveformKind::DftsOfdm, 4.0, 24, 9, 3);
    CHECK(one.per_trial == many.per_trial);
    CHECK(one.evm_db == many.evm_db);
    CHECK_THROWS_AS(measure_evm(s, WaveformKind::CpOfdm, 4.0, 0, 9), Error);
}

TEST_CASE("EVM falls with backoff and DFT-s-OFDM is cleaner") {
    const auto s = default_setup();
    for (auto kind : {WaveformKind::CpOfdm, WaveformKind::DftsOfdm}) {
        double prev = 0.0;
        for (double b : {2.0, 4.0, 6.0, 8.0, 10.0}) {
            const double e = measure_evm(s, kind, b, 500, 1).evm_db;
            CHECK(e < prev);
            prev = e;
        }
    }
    for (int b = 3; b <= 10; ++b) {
        const double cp = measure_evm(s, WaveformKind::CpOfdm, b, 200, 1).evm_db;
        const double dft = measure_evm(s, WaveformKind::DftsOfdm, b, 200, 1).evm_db;
        CHECK(dft <= cp + 0.5);
    }
}

TEST_CASE("minimum backoff") {
    const auto s = default_setup();
    const double cp28 = min_backoff(s, WaveformKind::CpOfdm, -28.0, 100, 1);
    const double dft28 = min_backoff(s, WaveformKind::DftsOfdm, -28.0, 100, 1);
    const double dft31 = min_backoff(s, WaveformKind::DftsOfdm, -31.0, 100, 1);
    CHECK(dft28 < cp28);
    CHECK(dft31 > dft28);
    CHECK(measure_evm(s, WaveformKind::CpOfdm, cp28, 100, 1).evm_db <= -28.0);
    CHECK(measure_evm(s, WaveformKind::CpOfdm, cp28 - 0.05, 100, 1).evm_db > -28.0);
    CHECK_THROWS_AS(min_backoff(s, WaveformKind::CpOfdm, -80.0, 20, 1), InfeasibleError);
    CHECK_THROWS_AS(min_backoff(s, WaveformKind::CpOfdm, -28.0, 20, 1, {0.0, 0.05}), Error);
}

TEST_CASE("per-tone receiver agrees with the dense MMSE in the linear regime") {
    for (auto ch : {ChannelKind::Identity, ChannelKind::Tdl}) {
        const auto s = toy_setup(ch, 25.5);
        for (auto kind : {WaveformKind::CpOfdm, WaveformKind::DftsOfdm}) {
            double e_diag = 0.0, e_full = 0.0, ref = 0.0;
            for (int i = 0; i < 40; ++i) {
                const auto t = simulate_trial(s, kind, 30.0, i, 4);
                const auto d = detect(t, kind);
                const auto f = oracle::full_mmse(t, kind, s.rapp);
                for (std::size_t k = 0; k < d.size(); ++k) {
                    e_diag += std::norm(d[k] - t.data[k]);
                    e_full += std::norm(f(static_cast<Eigen::Index>(k)) - t.data[k]);
                    ref += std::norm(t.data[k]);
                }
            }
            CHECK(std::abs(10.0 * std::log10(e_diag / e_full)) < 0.1);
        }
    }
}

}
