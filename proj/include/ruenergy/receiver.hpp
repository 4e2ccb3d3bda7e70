#pragma once

#include "ruenergy/channel.hpp"
#include "ruenergy/pa.hpp"
#include "ruenergy/waveform.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ruenergy::receiver {

enum class ChannelKind { Tdl, Identity };

/// Everything one link-level trial needs, derived once from the scenario.
struct LinkSetup {
    waveform::FrameParams frame;
    pa::RappModel rapp;
    channel::TdlProfile profile;
    double delay_spread_s = 300e-9;
    double sample_rate_hz = 2048 * 15e3;
    double snr_db = 40.0;          // mean PA output power over noise variance
    ChannelKind channel = ChannelKind::Tdl;
    bool noiseless = false;
    double tx_phase_rad = 0.0;     // common phase rotation applied after the PA

    static LinkSetup from(const ScenarioConfig& cfg);
};

/// Intermediate signals of one trial, kept for oracles and plots.
struct TrialSignals {
    CVec data;            // d
    CVec tx;              // x before the PA (unit mean power frame)
    CVec drive;           // PA input after backoff scaling
    CVec pa_out;          // PA output
    channel::ChannelRealization channel;
    CVec rx_grid;         // received grid, centered order
    CVec h_eff;           // per-tone linearized channel on the centered grid
    double noise_variance = 0.0;
    std::vector<std::size_t> mapping;
    double scale = 1.0;   // backoff drive scale
    cplx bussgang{1.0, 0.0};
};

/// Runs transmitter, PA, channel and front-end FFT for trial `trial`.
TrialSignals simulate_trial(const LinkSetup& s, WaveformKind kind, double backoff_db, std::uint64_t trial,
                            std::uint64_t seed);

/// Per-tone MMSE conj(h) / (|h|^2 + sigma2). Tones with h = 0 and sigma2 = 0 map to 0.
CVec mmse_equalize(std::span<const cplx> y, std::span<const cplx> h, double sigma2);

/// Extracts the active tones and undoes the spreading for DFT-s-OFDM.
CVec despread(std::span<const cplx> grid, std::span<const std::size_t> mapping, WaveformKind kind);

/// Equalized and despread symbol estimates for one trial.
CVec detect(const TrialSignals& t, WaveformKind kind);

struct EvmReport {
    double evm_rms = 0.0;
    double evm_db = 0.0;
    int trials = 0;
    std::vector<double> per_trial;  // dB
    WaveformKind kind = WaveformKind::CpOfdm;
    double backoff_db = 0.0;
};

/// Pooled data-aided EVM over `trials` independent trials.
EvmReport measure_evm(const LinkSetup& s, WaveformKind kind, double backoff_db, int trials, std::uint64_t seed,
                      int threads = 0);

struct BackoffSearch {
    double max_db = 20.0;
    double tolerance_db = 0.05;
};

/// Smallest backoff meeting `evm_req_db`, by bisection with the seed frozen
/// across probes. Returns the feasible end of the final bracket. Throws
/// InfeasibleError when the requirement fails at the top of the bracket.
double min_backoff(const LinkSetup& s, WaveformKind kind, double evm_req_db, int trials, std::uint64_t seed,
                   BackoffSearch search = {}, int threads = 0);

} // namespace ruenergy::receiver
