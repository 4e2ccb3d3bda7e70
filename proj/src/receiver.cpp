#include "ruenergy/receiver.hpp"

#include "ruenergy/error.hpp"
#include "ruenergy/parallel.hpp"

#include <cmath>

namespace ruenergy::receiver {

LinkSetup LinkSetup::from(const ScenarioConfig& cfg) {
    LinkSetup s;
    s.frame = waveform::FrameParams::from(cfg);
    s.rapp = pa::RappModel::from(cfg.pa);
    s.profile = channel::profile_for(cfg);
    s.delay_spread_s = cfg.channel.delay_spread_s;
    s.sample_rate_hz = static_cast<double>(cfg.waveform.fft_size) * cfg.waveform.oversample *
                       cfg.waveform.subcarrier_spacing_hz;
    s.snr_db = cfg.channel.link_snr_db;
    return s;
}

TrialSignals simulate_trial(const LinkSetup& s, WaveformKind kind, double backoff_db, std::uint64_t trial,
                            std::uint64_t seed) {
    RngStream data_rng(seed, trial, StreamTag::Data);
    auto frame = waveform::random_frame(s.frame, kind, data_rng);

    TrialSignals t;
    t.data = std::move(frame.data_symbols);
    t.mapping = std::move(frame.mapping);
    t.tx = std::move(frame.time_samples);

    auto bo = pa::apply_backoff(t.tx, backoff_db, s.rapp);
    t.scale = bo.scale;
    t.bussgang = pa::bussgang_gain(bo.drive, bo.output);
    t.drive = std::move(bo.drive);
    t.pa_out = std::move(bo.output);
    const cplx rotation = std::polar(1.0, s.tx_phase_rad);
    if (s.tx_phase_rad != 0.0)
        for (auto& v : t.pa_out) v *= rotation;

    const std::size_t len = t.tx.size();
    if (s.channel == ChannelKind::Tdl) {
        RngStream ch_rng(seed, trial, StreamTag::Channel);
        t.channel = channel::draw_tdl(s.profile, s.delay_spread_s, s.sample_rate_hz, len, ch_rng);
    } else {
        t.channel = channel::identity_channel(len);
    }

    t.noise_variance = s.noiseless ? 0.0 : dsp::mean_power(t.pa_out) * std::pow(10.0, -s.snr_db / 10.0);
    RngStream noise_rng(seed, trial, StreamTag::Noise);
    const CVec y = channel::apply_channel(t.pa_out, t.channel, t.noise_variance, noise_rng);

    // Back to the N-tone centered grid; oversampled bins outside it carry no data.
    const std::size_t n = s.frame.fft_size;
    const std::size_t offset = len / 2 - n / 2;
    const CVec full = waveform::to_frequency_domain(y);
    const cplx gain = t.bussgang * t.scale * rotation;
    t.rx_grid.resize(n);
    t.h_eff.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        t.rx_grid[c] = full[c + offset];
        t.h_eff[c] = gain * t.channel.freq_response[dsp::centered_to_bin(c + offset, len)];
    }
    return t;
}

CVec mmse_equalize(std::span<const cplx> y, std::span<const cplx> h, double sigma2) {
    require(y.size() == h.size(), "received grid and channel lengths differ");
    require(sigma2 >= 0.0, "noise variance must be >= 0");
    CVec out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double den = std::norm(h[k]) + sigma2;
        out[k] = den > 0.0 ? std::conj(h[k]) * y[k] / den : cplx{};
    }
    return out;
}

CVec despread(std::span<const cplx> grid, std::span<const std::size_t> mapping, WaveformKind kind) {
    require(!mapping.empty(), "empty tone mapping");
    CVec tones(mapping.size());
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (mapping[i] >= grid.size())
            throw Error(ErrorCode::InvalidArgument, "tone mapping does not match the received grid");
        tones[i] = grid[mapping[i]];
    }
    return kind == WaveformKind::DftsOfdm ? waveform::dft_despread(tones) : tones;
}

CVec detect(const TrialSignals& t, WaveformKind kind) {
    CVec y(t.mapping.size());
    CVec h(t.mapping.size());
    for (std::size_t i = 0; i < t.mapping.size(); ++i) {
        y[i] = t.rx_grid[t.mapping[i]];
        h[i] = t.h_eff[t.mapping[i]];
    }
    const CVec eq = mmse_equalize(y, h, t.noise_variance);
    return kind == WaveformKind::DftsOfdm ? waveform::dft_despread(eq) : eq;
}

namespace {

double to_db(double ratio) { return 10.0 * std::log10(ratio); }

} // namespace

EvmReport measure_evm(const LinkSetup& s, WaveformKind kind, double backoff_db, int trials, std::uint64_t seed,
                      int threads) {
    require(trials >= 1, "trials must be >= 1");
    std::vector<double> err(static_cast<std::size_t>(trials));
    std::vector<double> ref(static_cast<std::size_t>(trials));
    parallel_for(err.size(), threads, [&](std::size_t i) {
        const auto t = simulate_trial(s, kind, backoff_db, i, seed);
        const CVec est = detect(t, kind);
        double e = 0.0;
        for (std::size_t k = 0; k < est.size(); ++k) e += std::norm(est[k] - t.data[k]);
        err[i] = e;
        ref[i] = dsp::energy(t.data);
    });

    EvmReport r;
    r.kind = kind;
    r.backoff_db = backoff_db;
    r.trials = trials;
    r.per_trial.resize(err.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        num += err[i];
        den += ref[i];
        r.per_trial[i] = to_db(err[i] / ref[i]);
    }
    r.evm_rms = std::sqrt(num / den);
    r.evm_db = 20.0 * std::log10(r.evm_rms);
    return r;
}

double min_backoff(const LinkSetup& s, WaveformKind kind, double evm_req_db, int trials, std::uint64_t seed,
                   BackoffSearch search, int threads) {
    require(search.max_db > 0.0 && search.tolerance_db > 0.0, "invalid backoff search bracket");
    const auto meets = [&](double b) {
        try {
            return measure_evm(s, kind, b, trials, seed, threads).evm_db <= evm_req_db;
        } catch (const InfeasibleError&) {
            return false; // the PA cannot reach this output power
        }
    };
    if (!meets(search.max_db)) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "EVM requirement %.2f dB is not met by %s within %.1f dB of backoff", evm_req_db,
                      std::string(to_string(kind)).c_str(), search.max_db);
        throw InfeasibleError(msg);
    }
    double lo = 0.0;
    double hi = search.max_db;
    while (hi - lo > search.tolerance_db) {
        const double mid = 0.5 * (lo + hi);
        if (meets(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

} // namespace ruenergy::receiver
