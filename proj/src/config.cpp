#include "ruenergy/config.hpp"

#include "ruenergy/error.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ruenergy {

double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double w_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double ChannelConfig::large_scale_gain() const { return db_to_linear(large_scale_gain_db); }
double ChannelConfig::noise_psd_w_hz() const { return dbm_to_w(noise_psd_dbm_hz + noise_figure_db); }
double PaProfile::p_sat_w() const { return dbm_to_w(p_sat_dbm); }

std::string_view to_string(ToneMapping m) {
    return m == ToneMapping::SplitLocalized ? "split-localized" : "localized";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) throw ConfigError(key, 0, "expected a number, got an empty value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw ConfigError(key, 0, "not a number: '" + s + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view text) {
    const auto s = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ConfigError(key, 0, "not an integer: '" + std::string(s) + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
    std::vector<double> out;
    auto rest = trim(text);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

// Typed accessors for one configuration field.
struct FieldOps {
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <class T>
FieldOps make_ops(const std::string& key, T& (*ref)(ScenarioConfig&)) {
    FieldOps ops;
    ops.set = [key, ref](ScenarioConfig& c, std::string_view text) {
        T& field = ref(c);
        if constexpr (std::is_same_v<T, double>) {
            field = parse_double(key, text);
        } else if constexpr (std::is_same_v<T, int>) {
            field = parse_int<int>(key, text);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            field = parse_int<std::uint64_t>(key, text);
        } else if constexpr (std::is_same_v<T, std::string>) {
            field = std::string(trim(text));
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            const auto t = trim(text);
            if (t.empty() || t == "auto") field.reset();
            else field = parse_double(key, t);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            field = parse_list(key, text);
        } else if constexpr (std::is_same_v<T, ToneMapping>) {
            const auto t = trim(text);
            if (t == "split-localized") field = ToneMapping::SplitLocalized;
            else if (t == "localized") field = ToneMapping::Localized;
            else throw ConfigError(key, 0, "expected 'split-localized' or 'localized', got '" + std::string(t) + "'");
        } else if constexpr (std::is_same_v<T, ChannelStats>) {
            const auto t = trim(text);
            if (t == "median") field = ChannelStats::Median;
            else if (t == "fixed") field = ChannelStats::Fixed;
            else throw ConfigError(key, 0, "expected 'median' or 'fixed', got '" + std::string(t) + "'");
        }
    };
    ops.get = [ref](const ScenarioConfig& c) -> std::string {
        const T& field = ref(const_cast<ScenarioConfig&>(c));
        if constexpr (std::is_same_v<T, double>) {
            return format_double(field);
        } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
            return std::to_string(field);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return field;
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            return field ? format_double(*field) : std::string("auto");
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            std::string out;
            for (std::size_t i = 0; i < field.size(); ++i) {
                if (i) out += ", ";
                out += format_double(field[i]);
            }
            return out;
        } else if constexpr (std::is_same_v<T, ToneMapping>) {
            return std::string(to_string(field));
        } else if constexpr (std::is_same_v<T, ChannelStats>) {
            return field == ChannelStats::Median ? "median" : "fixed";
        }
    };
    return ops;
}

struct Registry {
    std::vector<std::string> order;
    std::map<std::string, FieldOps> fields;

    template <class T>
    void add(const std::string& key, T& (*ref)(ScenarioConfig&)) {
        order.push_back(key);
        fields.emplace(key, make_ops<T>(key, ref));
    }
};

#define RUE_FIELD(reg, key, member) \
    reg.add(key, +[](ScenarioConfig& c) -> decltype(auto) { return (c.member); })

const Registry& registry() {
    static const Registry reg = [] {
        Registry r;
        RUE_FIELD(r, "waveform.carrier_frequency_hz", waveform.carrier_frequency_hz);
        RUE_FIELD(r, "waveform.subcarrier_spacing_hz", waveform.subcarrier_spacing_hz);
        RUE_FIELD(r, "waveform.num_resource_blocks", waveform.num_resource_blocks);
        RUE_FIELD(r, "waveform.allocated_tones", waveform.allocated_tones);
        RUE_FIELD(r, "waveform.fft_size", waveform.fft_size);
        RUE_FIELD(r, "waveform.bandwidth_hz", waveform.bandwidth_hz);
        RUE_FIELD(r, "waveform.modulation_order", waveform.modulation_order);
        RUE_FIELD(r, "waveform.mapping", waveform.mapping);
        RUE_FIELD(r, "waveform.oversample", waveform.oversample);
        RUE_FIELD(r, "waveform.papr_oversample", waveform.papr_oversample);

        RUE_FIELD(r, "channel.delay_spread_s", channel.delay_spread_s);
        RUE_FIELD(r, "channel.speed_kmh", channel.speed_kmh);
        RUE_FIELD(r, "channel.fading", channel.fading);
        RUE_FIELD(r, "channel.profile_file", channel.profile_file);
        RUE_FIELD(r, "channel.large_scale_gain_db", channel.large_scale_gain_db);
        RUE_FIELD(r, "channel.noise_psd_dbm_hz", channel.noise_psd_dbm_hz);
        RUE_FIELD(r, "channel.noise_figure_db", channel.noise_figure_db);
        RUE_FIELD(r, "channel.link_snr_db", channel.link_snr_db);
        RUE_FIELD(r, "channel.num_tx_antennas", channel.num_tx_antennas);
        RUE_FIELD(r, "channel.num_rx_antennas", channel.num_rx_antennas);

        RUE_FIELD(r, "pa.p_sat_dbm", pa.p_sat_dbm);
        RUE_FIELD(r, "pa.smoothness", pa.smoothness);
        RUE_FIELD(r, "pa.am_pm_alpha", pa.am_pm_alpha);
        RUE_FIELD(r, "pa.am_pm_beta", pa.am_pm_beta);
        RUE_FIELD(r, "pa.am_pm_q1", pa.am_pm_q1);
        RUE_FIELD(r, "pa.am_pm_q2", pa.am_pm_q2);
        RUE_FIELD(r, "pa.eta_sat", pa.eta_sat);

        RUE_FIELD(r, "circuit.p_lo_w", circuit.p_lo_w);
        RUE_FIELD(r, "circuit.p_filt_w", circuit.p_filt_w);
        RUE_FIELD(r, "circuit.p_mix_w", circuit.p_mix_w);
        RUE_FIELD(r, "circuit.p_dac_w", circuit.p_dac_w);
        RUE_FIELD(r, "circuit.p_pa_idle_w", circuit.p_pa_idle_w);

        RUE_FIELD(r, "optimizer.overhead_factor", optimizer.overhead_factor);
        RUE_FIELD(r, "optimizer.evm_requirement_db", optimizer.evm_requirement_db);
        RUE_FIELD(r, "optimizer.evm_constraint_alt_db", optimizer.evm_constraint_alt_db);
        RUE_FIELD(r, "optimizer.backoff_search_max_db", optimizer.backoff_search_max_db);
        RUE_FIELD(r, "optimizer.backoff_tolerance_db", optimizer.backoff_tolerance_db);
        RUE_FIELD(r, "optimizer.tolerance", optimizer.tolerance);
        RUE_FIELD(r, "optimizer.max_iterations", optimizer.max_iterations);
        RUE_FIELD(r, "optimizer.channel_stats", optimizer.channel_stats);
        RUE_FIELD(r, "optimizer.channel_draws", optimizer.channel_draws);
        RUE_FIELD(r, "optimizer.b_min_cp_db", optimizer.b_min_cp_db);
        RUE_FIELD(r, "optimizer.b_min_dft_db", optimizer.b_min_dft_db);
        RUE_FIELD(r, "optimizer.backoff_grid_step_db", optimizer.backoff_grid_step_db);

        RUE_FIELD(r, "sweep.trials", sweep.trials);
        RUE_FIELD(r, "sweep.seed", sweep.seed);
        RUE_FIELD(r, "sweep.threads", sweep.threads);
        RUE_FIELD(r, "sweep.se_min", sweep.se_min);
        RUE_FIELD(r, "sweep.se_max", sweep.se_max);
        RUE_FIELD(r, "sweep.se_points", sweep.se_points);
        RUE_FIELD(r, "sweep.backoff_db", sweep.backoff_db);
        RUE_FIELD(r, "sweep.constellation_backoff_db", sweep.constellation_backoff_db);
        RUE_FIELD(r, "sweep.papr_symbols", sweep.papr_symbols);
        return r;
    }();
    return reg;
}

#undef RUE_FIELD

const FieldOps& lookup(const std::string& key, int line) {
    const auto& reg = registry();
    const auto it = reg.fields.find(key);
    if (it == reg.fields.end()) throw ConfigError(key, line, "unknown key");
    return it->second;
}

void apply(ScenarioConfig& cfg, const std::string& key, std::string_view value, int line) {
    const auto& ops = lookup(key, line);
    try {
        ops.set(cfg, value);
    } catch (const ConfigError& e) {
        if (line == 0) throw;
        throw ConfigError(key, line, e.message());
    }
}

void parse_into(ScenarioConfig& cfg, std::string_view text) {
    static const std::set<std::string, std::less<>> sections = {"waveform", "channel", "pa",
                                                                "circuit", "optimizer", "sweep"};
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", line_no, "malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!sections.contains(name)) throw ConfigError(std::string(name), line_no, "unknown section");
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
        if (section.empty()) throw ConfigError("", line_no, "key outside of any section");
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        if (!seen.insert(key).second) throw ConfigError(key, line_no, "duplicate key");
        apply(cfg, key, line.substr(eq + 1), line_no);
    }
}

void fail(const char* key, const std::string& constraint) { throw ConfigError(key, 0, "violates " + constraint); }

} // namespace

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

Override parse_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError(std::string(assignment), 0, "override must have the form section.key=value");
    return {std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1)))};
}

void set_value(ScenarioConfig& cfg, const std::string& key, const std::string& value) { apply(cfg, key, value, 0); }

std::string get_value(const ScenarioConfig& cfg, const std::string& key) { return lookup(key, 0).get(cfg); }

std::vector<std::string> config_keys() { return registry().order; }

ScenarioConfig parse_scenario(std::string_view text, const std::vector<Override>& overrides) {
    ScenarioConfig cfg = default_scenario();
    parse_into(cfg, text);
    for (const auto& [key, value] : overrides) set_value(cfg, key, value);
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), overrides);
}

void validate(const ScenarioConfig& c) {
    const auto& w = c.waveform;
    if (!(w.subcarrier_spacing_hz > 0)) fail("waveform.subcarrier_spacing_hz", "subcarrier_spacing_hz > 0");
    if (w.num_resource_blocks < 1) fail("waveform.num_resource_blocks", "num_resource_blocks >= 1");
    if (w.allocated_tones != 12 * w.num_resource_blocks)
        fail("waveform.allocated_tones", "allocated_tones = 12 * num_resource_blocks");
    if (w.fft_size < 1) fail("waveform.fft_size", "fft_size >= 1");
    if (w.allocated_tones > w.fft_size) fail("waveform.allocated_tones", "allocated_tones <= fft_size");
    if (w.mapping == ToneMapping::SplitLocalized && w.allocated_tones + 1 > w.fft_size)
        fail("waveform.allocated_tones", "allocated_tones + 1 <= fft_size for split-localized mapping (DC tone unused)");
    if (!(w.bandwidth_hz > 0)) fail("waveform.bandwidth_hz", "bandwidth_hz > 0");
    if (w.modulation_order != 4 && w.modulation_order != 16 && w.modulation_order != 64 && w.modulation_order != 256)
        fail("waveform.modulation_order", "modulation_order in {4, 16, 64, 256}");
    if (w.oversample < 1) fail("waveform.oversample", "oversample >= 1");
    if (w.papr_oversample < 1) fail("waveform.papr_oversample", "papr_oversample >= 1");

    const auto& ch = c.channel;
    if (!(ch.delay_spread_s >= 0) || !std::isfinite(ch.delay_spread_s))
        fail("channel.delay_spread_s", "delay_spread_s >= 0");
    if (ch.fading != "block") fail("channel.fading", "fading = block");
    if (!std::isfinite(ch.large_scale_gain_db)) fail("channel.large_scale_gain_db", "G > 0 (finite dB value)");
    if (!std::isfinite(ch.noise_psd_dbm_hz) || !std::isfinite(ch.noise_figure_db) || !(ch.noise_psd_w_hz() > 0))
        fail("channel.noise_psd_dbm_hz", "N0 > 0 (finite dB value)");
    if (!std::isfinite(ch.link_snr_db)) fail("channel.link_snr_db", "finite link_snr_db");
    if (ch.num_tx_antennas != 2) fail("channel.num_tx_antennas", "num_tx_antennas = 2 (2x2 link budget)");
    if (ch.num_rx_antennas != 2) fail("channel.num_rx_antennas", "num_rx_antennas = 2 (2x2 link budget)");

    const auto& pa = c.pa;
    if (!std::isfinite(pa.p_sat_dbm)) fail("pa.p_sat_dbm", "finite p_sat_dbm");
    if (!(pa.smoothness > 0)) fail("pa.smoothness", "smoothness > 0");
    if (!(pa.eta_sat > 0 && pa.eta_sat <= 1)) fail("pa.eta_sat", "0 < eta_sat <= 1");
    if (!(pa.am_pm_beta > 0)) fail("pa.am_pm_beta", "am_pm_beta > 0");
    if (!std::isfinite(pa.am_pm_alpha) || !std::isfinite(pa.am_pm_q1) || !std::isfinite(pa.am_pm_q2))
        fail("pa.am_pm_alpha", "finite AM/PM parameters");

    const auto& ci = c.circuit;
    if (!(ci.p_lo_w >= 0)) fail("circuit.p_lo_w", "p_lo_w >= 0");
    if (!(ci.p_filt_w >= 0)) fail("circuit.p_filt_w", "p_filt_w >= 0");
    if (!(ci.p_mix_w >= 0)) fail("circuit.p_mix_w", "p_mix_w >= 0");
    if (!(ci.p_dac_w >= 0)) fail("circuit.p_dac_w", "p_dac_w >= 0");
    if (!(ci.p_pa_idle_w >= 0)) fail("circuit.p_pa_idle_w", "p_pa_idle_w >= 0");

    const auto& o = c.optimizer;
    if (!(o.overhead_factor > 0 && o.overhead_factor <= 1)) fail("optimizer.overhead_factor", "0 < overhead_factor <= 1");
    if (!(o.evm_requirement_db < 0)) fail("optimizer.evm_requirement_db", "evm_requirement_db < 0");
    if (!(o.evm_constraint_alt_db < 0)) fail("optimizer.evm_constraint_alt_db", "evm_constraint_alt_db < 0");
    if (!(o.backoff_search_max_db > 0)) fail("optimizer.backoff_search_max_db", "backoff_search_max_db > 0");
    if (!(o.backoff_tolerance_db > 0)) fail("optimizer.backoff_tolerance_db", "backoff_tolerance_db > 0");
    if (!(o.tolerance > 0)) fail("optimizer.tolerance", "tolerance > 0");
    if (o.max_iterations < 1) fail("optimizer.max_iterations", "max_iterations >= 1");
    if (o.channel_draws < 1) fail("optimizer.channel_draws", "channel_draws >= 1");
    if (o.b_min_cp_db && !(*o.b_min_cp_db >= 0)) fail("optimizer.b_min_cp_db", "b_min_cp_db >= 0");
    if (o.b_min_dft_db && !(*o.b_min_dft_db >= 0)) fail("optimizer.b_min_dft_db", "b_min_dft_db >= 0");
    if (!(o.backoff_grid_step_db >= 0)) fail("optimizer.backoff_grid_step_db", "backoff_grid_step_db >= 0");

    const auto& s = c.sweep;
    if (s.trials < 1) fail("sweep.trials", "trials >= 1");
    if (s.threads < 0) fail("sweep.threads", "threads >= 0");
    if (!(s.se_min > 0 && s.se_max > s.se_min)) fail("sweep.se_min", "0 < se_min < se_max");
    if (s.se_points < 2) fail("sweep.se_points", "se_points >= 2");
    if (s.backoff_db.empty()) fail("sweep.backoff_db", "non-empty backoff list");
    for (double b : s.backoff_db)
        if (!(b >= 0)) fail("sweep.backoff_db", "every backoff >= 0");
    if (!(s.constellation_backoff_db >= 0)) fail("sweep.constellation_backoff_db", "constellation_backoff_db >= 0");
    if (s.papr_symbols < 1) fail("sweep.papr_symbols", "papr_symbols >= 1");
}

std::string serialize(const ScenarioConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& key : registry().order) {
        const auto dot = key.find('.');
        const auto sec = key.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) out += "\n";
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += key.substr(dot + 1) + " = " + registry().fields.at(key).get(cfg) + "\n";
    }
    return out;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write config file '" + path + "'");
    out << serialize(cfg);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : serialize(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace ruenergy
