#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ruenergy {

enum class ToneMapping { SplitLocalized, Localized };
enum class ChannelStats { Median, Fixed };

struct WaveformConfig {
    double carrier_frequency_hz = 3.5e9; // informational, not used by any computation
    double subcarrier_spacing_hz = 15e3;
    int num_resource_blocks = 100;
    int allocated_tones = 1200;
    int fft_size = 2048;
    double bandwidth_hz = 20e6;
    int modulation_order = 64;
    ToneMapping mapping = ToneMapping::SplitLocalized;
    int oversample = 1;
    int papr_oversample = 4;

    bool operator==(const WaveformConfig&) const = default;
};

struct ChannelConfig {
    double delay_spread_s = 300e-9;
    double speed_kmh = 100.0; // informational; fading is drawn independently per symbol
    std::string fading = "block";
    std::string profile_file; // empty selects the built-in TDL-C table
    double large_scale_gain_db = -110.0;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 7.0;
    double link_snr_db = 40.0; // receive SNR of the link-level EVM simulation
    int num_tx_antennas = 2;
    int num_rx_antennas = 2;

    double large_scale_gain() const;
    /// Noise PSD including the noise figure, W/Hz.
    double noise_psd_w_hz() const;

    bool operator==(const ChannelConfig&) const = default;
};

struct PaProfile {
    double p_sat_dbm = 44.0;
    double smoothness = 3.0;
    double am_pm_alpha = 190.0 * std::numbers::pi / 180.0;
    double am_pm_beta = 0.1;
    double am_pm_q1 = 3.8;
    double am_pm_q2 = 2.5;
    double eta_sat = 0.45;

    double p_sat_w() const;

    bool operator==(const PaProfile&) const = default;
};

struct CircuitProfile {
    double p_lo_w = 0.5;
    double p_filt_w = 0.02;
    double p_mix_w = 0.38;
    double p_dac_w = 3.5;
    double p_pa_idle_w = 3.5;

    /// Static power added by each active transmit chain.
    double per_chain_w() const { return p_filt_w + p_mix_w + p_dac_w + p_pa_idle_w; }
    double total_w(int active_chains) const { return p_lo_w + active_chains * per_chain_w(); }

    bool operator==(const CircuitProfile&) const = default;
};

struct OptimizerConfig {
    double overhead_factor = 0.9;
    double evm_requirement_db = -31.0;
    double evm_constraint_alt_db = -28.0;
    double backoff_search_max_db = 20.0;
    double backoff_tolerance_db = 0.05;
    double tolerance = 1e-9;
    int max_iterations = 1000;
    ChannelStats channel_stats = ChannelStats::Median;
    int channel_draws = 1000;
    std::optional<double> b_min_cp_db;
    std::optional<double> b_min_dft_db;
    double backoff_grid_step_db = 0.0; // > 0 enables the outer backoff validation grid

    bool operator==(const OptimizerConfig&) const = default;
};

struct SweepConfig {
    int trials = 500;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
    double se_min = 0.25;
    double se_max = 12.0;
    int se_points = 40;
    std::vector<double> backoff_db = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    double constellation_backoff_db = 5.0;
    int papr_symbols = 100000;

    bool operator==(const SweepConfig&) const = default;
};

/// Full scenario. Immutable after load; share read-only across workers.
struct ScenarioConfig {
    WaveformConfig waveform;
    ChannelConfig channel;
    PaProfile pa;
    CircuitProfile circuit;
    OptimizerConfig optimizer;
    SweepConfig sweep;

    bool operator==(const ScenarioConfig&) const = default;
};

using Override = std::pair<std::string, std::string>;

ScenarioConfig default_scenario();

/// Reads a sectioned key-value file, applies `overrides` ("section.key", value)
/// on top, then validates. Throws ConfigError.
ScenarioConfig load_scenario(const std::string& path, const std::vector<Override>& overrides = {});

/// Same as load_scenario but from in-memory text.
ScenarioConfig parse_scenario(std::string_view text, const std::vector<Override>& overrides = {});

/// Parses "section.key=value".
Override parse_override(std::string_view assignment);

void set_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::string get_value(const ScenarioConfig& cfg, const std::string& key);
std::vector<std::string> config_keys();

void validate(const ScenarioConfig& cfg);

std::string serialize(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a over the serialized form.
std::uint64_t config_hash(const ScenarioConfig& cfg);

double dbm_to_w(double dbm);
double w_to_dbm(double w);
double db_to_linear(double db);
double linear_to_db(double lin);

std::string_view to_string(ToneMapping m);

} // namespace ruenergy
