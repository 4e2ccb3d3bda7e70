#include "ruenergy/experiment.hpp"

#include "ruenergy/channel.hpp"
#include "ruenergy/log.hpp"
#include "ruenergy/optimizer.hpp"
#include "ruenergy/plot.hpp"
#include "ruenergy/receiver.hpp"
#include "ruenergy/version.hpp"
#include "ruenergy/waveform.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

namespace fs = std::filesystem;

namespace ruenergy::experiment {

namespace {

using linkbudget::LinkMode;
using optimizer::TransmissionMode;

constexpr WaveformKind kWaveforms[] = {WaveformKind::CpOfdm, WaveformKind::DftsOfdm};
constexpr TransmissionMode kModes[] = {TransmissionMode::FullMimo, TransmissionMode::SwitchCp,
                                       TransmissionMode::SwitchDft};

std::string fmt(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string(); }

/// Collects output files so the manifest can list them.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    void csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + path(name) + "'");
        out << header << '\n';
        for (const auto& r : rows) out << r << '\n';
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + path(name) + "'");
        files_.push_back(name);
        log::info("wrote " + path(name));
    }

    void svg(const std::string& name, const plot::Figure& fig) {
        plot::write_svg(fig, path(name));
        files_.push_back(name);
        log::info("wrote " + path(name));
    }

    void text(const std::string& name, const std::string& body) {
        std::ofstream out(path(name), std::ios::binary);
        if (!out || !(out << body)) throw Error(ErrorCode::Io, "cannot write '" + path(name) + "'");
        files_.push_back(name);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string join(std::initializer_list<std::string> fields) {
    std::string out;
    for (const auto& f : fields) {
        if (!out.empty() || &f != fields.begin()) out += ',';
        out += f;
    }
    return out;
}

struct Context {
    const ScenarioConfig& cfg;
    Outputs& out;
    bool plot;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

void run_papr(Context& c) {
    auto params = waveform::FrameParams::from(c.cfg);
    params.oversample = c.cfg.waveform.papr_oversample;
    const auto symbols = static_cast<std::size_t>(c.cfg.sweep.papr_symbols);
    std::vector<std::string> ccdf_rows;
    std::vector<std::string> summary;
    plot::Figure fig{"PAPR CCDF", "PAPR threshold (dB)", "P(PAPR > threshold)", true, false, {}};
    for (auto kind : kWaveforms) {
        auto samples = waveform::papr_samples(params, kind, symbols, c.cfg.sweep.seed, c.cfg.sweep.threads);
        std::sort(samples.begin(), samples.end());
        const std::string name(to_string(kind));
        plot::Series s{name, {}, {}, false};
        for (int i = 0; i <= 160; ++i) {
            const double t = 0.1 * i;
            const auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), t);
            const double ccdf = static_cast<double>(above) / static_cast<double>(samples.size());
            ccdf_rows.push_back(join({name, fmt(t), fmt(ccdf)}));
            s.x.push_back(t);
            s.y.push_back(ccdf);
        }
        fig.series.push_back(std::move(s));
        const double q = waveform::ccdf_quantile(samples, 1e-3);
        const double median = samples[samples.size() / 2];
        summary.push_back(join({name, std::string(to_string(params.mapping)), std::to_string(params.qam_order),
                                std::to_string(params.oversample), std::to_string(symbols), fmt(q), fmt(median)}));
        log::info(name + " PAPR at 1e-3: " + fmt(q) + " dB");
    }
    c.out.csv("papr_ccdf.csv", "waveform,threshold_db,ccdf", ccdf_rows);
    c.out.csv("papr_summary.csv", "waveform,mapping,modulation_order,oversample,symbols,papr_ccdf_1e-3_db,median_db",
              summary);
    if (c.plot) c.out.svg("papr_ccdf.svg", fig);
}

void run_evm_sweep(Context& c) {
    const auto setup = receiver::LinkSetup::from(c.cfg);
    const auto& sw = c.cfg.sweep;
    std::vector<std::string> rows;
    plot::Figure fig{"EVM versus output backoff", "Output backoff (dB)", "EVM (dB)", false, false, {}};
    for (auto kind : kWaveforms) {
        const std::string name(to_string(kind));
        plot::Series s{name, {}, {}, false};
        for (double b : sw.backoff_db) {
            const auto r = receiver::measure_evm(setup, kind, b, sw.trials, sw.seed, sw.threads);
            rows.push_back(join({name, fmt(b), fmt(r.evm_db), std::to_string(sw.trials), std::to_string(sw.seed)}));
            s.x.push_back(b);
            s.y.push_back(r.evm_db);
            log::info(name + " b=" + fmt(b) + " dB: EVM " + fmt(r.evm_db) + " dB");
        }
        fig.series.push_back(std::move(s));
    }
    c.out.csv("evm_sweep.csv", "waveform,backoff_db,evm_db,trials,seed", rows);
    if (c.plot) c.out.svg("evm_vs_backoff.svg", fig);

    std::vector<std::string> points;
    const double b = sw.constellation_backoff_db;
    for (auto kind : kWaveforms) {
        const std::string name(to_string(kind));
        const auto t = receiver::simulate_trial(setup, kind, b, 0, sw.seed);
        const CVec est = receiver::detect(t, kind);
        plot::Series s{name, {}, {}, true};
        for (const auto& v : est) {
            points.push_back(join({name, fmt(b), fmt(v.real()), fmt(v.imag())}));
            s.x.push_back(v.real());
            s.y.push_back(v.imag());
        }
        if (c.plot) {
            plot::Figure cf{name + " constellation at " + fmt(b) + " dB backoff", "In-phase", "Quadrature", false, true,
                            {std::move(s)}};
            c.out.svg(kind == WaveformKind::CpOfdm ? "constellation_cp.svg" : "constellation_dft.svg", cf);
        }
    }
    c.out.csv("constellation.csv", "waveform,backoff_db,re,im", points);
}

void run_min_backoff(Context& c) {
    const auto setup = receiver::LinkSetup::from(c.cfg);
    const auto& o = c.cfg.optimizer;
    const auto& sw = c.cfg.sweep;
    const receiver::BackoffSearch search{o.backoff_search_max_db, o.backoff_tolerance_db};
    std::vector<std::string> rows;
    for (double req : {o.evm_requirement_db, o.evm_constraint_alt_db}) {
        for (auto kind : kWaveforms) {
            const double b = receiver::min_backoff(setup, kind, req, sw.trials, sw.seed, search, sw.threads);
            rows.push_back(join({std::string(to_string(kind)), fmt(req), fmt(b), std::to_string(sw.trials),
                                 std::to_string(sw.seed)}));
            log::info(std::string(to_string(kind)) + " b_min at " + fmt(req) + " dB: " + fmt(b) + " dB");
        }
    }
    c.out.csv("min_backoff.csv", "waveform,evm_req_db,b_min_db,trials,seed", rows);
}

void record_backoff(Context& c, const linkbudget::ModeBackoff& b) {
    c.extra["b_min_db"] = {{"CP-OFDM", b.cp_db}, {"DFT-s-OFDM", b.dft_db}};
}

void run_crossover(Context& c) {
    const auto backoff = resolve_backoff(c.cfg, c.cfg.optimizer.evm_requirement_db);
    record_backoff(c, backoff);
    const auto& o = c.cfg.optimizer;
    const auto& sw = c.cfg.sweep;
    const auto grid = linkbudget::linspace(sw.se_min, sw.se_max, sw.se_points);
    const std::pair<std::string, channel::ChannelGains> channels[] = {
        {"median", channel::channel_statistics(ChannelStats::Median, o.channel_draws, sw.seed)},
        {"fixed", channel::channel_statistics(ChannelStats::Fixed, 1, sw.seed)},
    };
    std::vector<std::string> curves;
    std::vector<std::string> points;
    for (const auto& [label, gains] : channels) {
        const auto in = linkbudget::LinkBudgetInput::from(c.cfg, gains);
        plot::Figure fig{"RU power versus spectral efficiency (" + label + " channel)", "Spectral efficiency (bits/s/Hz)",
                         "RU power (W)", false, false, {}};
        std::map<LinkMode, plot::Series> series;
        for (LinkMode m : {LinkMode::SimoCp, LinkMode::SimoDft, LinkMode::MimoCp})
            series[m] = plot::Series{std::string(linkbudget::to_string(m)), {}, {}, false};
        const auto power = [&](LinkMode m, double se) -> std::optional<double> {
            const auto r = linkbudget::ru_power_at(m, se, in, backoff, c.cfg.circuit, c.cfg.pa);
            return r ? std::optional<double>(r->p_ru) : std::nullopt;
        };
        for (LinkMode simo : {LinkMode::SimoCp, LinkMode::SimoDft}) {
            const std::string name(linkbudget::to_string(simo));
            for (double se : grid)
                curves.push_back(join({fmt(se), fmt(power(simo, se)), fmt(power(LinkMode::MimoCp, se)), name, label}));
            const auto x = linkbudget::crossover(in, simo, grid, backoff, c.cfg.circuit, c.cfg.pa);
            points.push_back(join({name, label, x ? "1" : "0", x ? fmt(x->se) : "", x ? fmt(x->p_ru) : "",
                                   fmt(backoff.of(simo))}));
            log::info(name + " crossover (" + label + "): " + (x ? fmt(x->se) + " bits/s/Hz" : "none"));
        }
        for (double se : grid)
            for (auto& [m, s] : series) {
                s.x.push_back(se);
                s.y.push_back(power(m, se).value_or(std::nan("")));
            }
        if (c.plot) {
            for (auto& [m, s] : series) fig.series.push_back(std::move(s));
            c.out.svg("crossover_" + label + ".svg", fig);
        }
    }
    c.out.csv("crossover_curves.csv", "se,p_ru_simo,p_ru_mimo,mode_simo,channel_label", curves);
    c.out.csv("crossover.csv", "mode_simo,channel_label,found,se_star,p_star_w,b_min_db", points);
}

optimizer::EeContext ee_context(Context& c) {
    const auto backoff = resolve_backoff(c.cfg, c.cfg.optimizer.evm_requirement_db);
    record_backoff(c, backoff);
    const auto& o = c.cfg.optimizer;
    const auto gains = channel::channel_statistics(o.channel_stats, o.channel_draws, c.cfg.sweep.seed);
    c.extra["channel"] = {{"stats", o.channel_stats == ChannelStats::Median ? "median" : "fixed"},
                          {"lambda0", gains.lambda0},
                          {"lambda1", gains.lambda1},
                          {"lambda_eff", gains.lambda_eff}};
    return optimizer::EeContext::from(c.cfg, gains, backoff);
}

void run_sweep_se(Context& c) {
    const auto ctx = ee_context(c);
    const auto& sw = c.cfg.sweep;
    const auto grid = linkbudget::linspace(sw.se_min, sw.se_max, sw.se_points);
    const auto rows = optimizer::sweep_modes(ctx, grid);
    std::vector<std::string> lines;
    std::map<TransmissionMode, plot::Series> power, ee;
    for (auto m : kModes) {
        power[m] = plot::Series{std::string(optimizer::to_string(m)), {}, {}, false};
        ee[m] = power[m];
    }
    for (const auto& r : rows) {
        lines.push_back(join({fmt(r.se), std::string(optimizer::to_string(r.mode)),
                              r.inner ? std::string(linkbudget::to_string(*r.inner)) : "", fmt(r.b_db),
                              r.feasible ? fmt(r.p_tx_w) : "", r.feasible ? fmt(r.p_ru_w) : "",
                              r.feasible ? fmt(r.ee) : "", r.feasible ? "1" : "0"}));
        power[r.mode].x.push_back(r.se);
        power[r.mode].y.push_back(r.feasible ? r.p_ru_w : std::nan(""));
        ee[r.mode].x.push_back(r.se);
        ee[r.mode].y.push_back(r.feasible ? r.ee / 1e6 : std::nan(""));
    }
    c.out.csv("sweep.csv", "se_bits_hz,mode,inner_selection,b_db,p_tx_w,p_ru_w,ee_bits_per_joule,feasible", lines);
    if (c.plot) {
        plot::Figure pf{"RU power versus spectral efficiency", "Spectral efficiency (bits/s/Hz)", "RU power (W)", false,
                        false, {}};
        plot::Figure ef{"Energy efficiency versus spectral efficiency", "Spectral efficiency (bits/s/Hz)",
                        "EE (Mbit/J)", false, false, {}};
        for (auto m : kModes) {
            pf.series.push_back(std::move(power[m]));
            ef.series.push_back(std::move(ee[m]));
        }
        c.out.svg("power_vs_se.svg", pf);
        c.out.svg("ee_vs_se.svg", ef);
    }
}

void run_optimize_ee(Context& c) {
    const auto ctx = ee_context(c);
    std::vector<std::string> rows;
    std::vector<std::string> trace;
    for (auto m : kModes) {
        const auto r = optimizer::solve_mode(ctx, m);
        const std::string name(optimizer::to_string(m));
        rows.push_back(join({name, fmt(r.p_star), fmt(r.y_star), fmt(r.ee), std::to_string(r.iterations),
                             std::string(linkbudget::to_string(r.inner)), fmt(r.b_db), fmt(r.se), fmt(r.p_ru)}));
        for (const auto& t : r.trace) trace.push_back(join({name, std::to_string(t.k), fmt(t.p), fmt(t.f)}));
        log::info(name + ": EE " + fmt(r.ee) + " bits/J at " + fmt(r.se) + " bits/s/Hz");
    }
    c.out.csv("ee_optimum.csv", "mode,p_star,y_star,ee,iterations,inner_selection,b_db,se,p_ru_w", rows);
    c.out.csv("ee_trace.csv", "mode,k,p,f", trace);

    const double step = c.cfg.optimizer.backoff_grid_step_db;
    if (step > 0.0) {
        std::vector<std::string> grid_rows;
        for (LinkMode lm : {LinkMode::SimoCp, LinkMode::SimoDft, LinkMode::MimoCp}) {
            const auto pts = optimizer::backoff_grid(ctx, lm, step, c.cfg.optimizer.backoff_search_max_db);
            for (const auto& p : pts) grid_rows.push_back(join({std::string(linkbudget::to_string(lm)), fmt(p.b_db), fmt(p.ee)}));
        }
        c.out.csv("backoff_grid.csv", "link_mode,b_db,ee", grid_rows);
    }

    if (c.plot) {
        plot::Figure fig{"EE versus per-PA transmit power", "Per-PA transmit power (W)", "EE (Mbit/J)", false, false, {}};
        for (LinkMode lm : {LinkMode::SimoCp, LinkMode::SimoDft, LinkMode::MimoCp}) {
            const auto prob = optimizer::build_problem(ctx, lm, ctx.backoff.of(lm));
            plot::Series s{std::string(linkbudget::to_string(lm)), {}, {}, false};
            for (int i = 1; i <= 200; ++i) {
                const double p = prob.p_max * i / 200.0;
                s.x.push_back(p);
                s.y.push_back(optimizer::objective_f(p, prob) / 1e6);
            }
            fig.series.push_back(std::move(s));
        }
        c.out.svg("ee_vs_power.svg", fig);
    }
}

const std::map<std::string, std::function<void(Context&)>>& handlers() {
    static const std::map<std::string, std::function<void(Context&)>> h = {
        {"papr", run_papr},         {"evm-sweep", run_evm_sweep}, {"min-backoff", run_min_backoff},
        {"crossover", run_crossover}, {"sweep-se", run_sweep_se},  {"optimize-ee", run_optimize_ee},
    };
    return h;
}

} // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"papr", "evm-sweep", "min-backoff", "crossover", "sweep-se",
                                               "optimize-ee"};
    return c;
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io: return 2;
    case ErrorCode::Infeasible: return 3;
    case ErrorCode::NonConvergence: return 4;
    default: return 1;
    }
}

ScenarioConfig resolve_config(const ExperimentSpec& spec) {
    std::vector<Override> overrides;
    for (const auto& o : spec.overrides) overrides.push_back(parse_override(o));
    if (spec.seed) overrides.emplace_back("sweep.seed", std::to_string(*spec.seed));
    if (spec.trials) overrides.emplace_back("sweep.trials", std::to_string(*spec.trials));
    if (spec.config_path.empty()) return parse_scenario("", overrides);
    return load_scenario(spec.config_path, overrides);
}

linkbudget::ModeBackoff resolve_backoff(const ScenarioConfig& cfg, double evm_req_db) {
    const auto& o = cfg.optimizer;
    const auto& sw = cfg.sweep;
    const receiver::BackoffSearch search{o.backoff_search_max_db, o.backoff_tolerance_db};
    std::optional<receiver::LinkSetup> setup;
    const auto measure = [&](std::optional<double> pinned, WaveformKind kind) {
        if (pinned) return *pinned;
        if (!setup) setup = receiver::LinkSetup::from(cfg);
        const double b = receiver::min_backoff(*setup, kind, evm_req_db, sw.trials, sw.seed, search, sw.threads);
        log::info(std::string(to_string(kind)) + " minimum backoff at " + fmt(evm_req_db) + " dB EVM: " + fmt(b) + " dB");
        return b;
    };
    linkbudget::ModeBackoff b;
    b.cp_db = measure(o.b_min_cp_db, WaveformKind::CpOfdm);
    b.dft_db = measure(o.b_min_dft_db, WaveformKind::DftsOfdm);
    return b;
}

void run(const ExperimentSpec& spec) {
    const auto it = handlers().find(spec.command);
    if (it == handlers().end()) throw Error(ErrorCode::InvalidArgument, "unknown command '" + spec.command + "'");
    const ScenarioConfig cfg = resolve_config(spec);
    Outputs out(spec.out_dir);
    Context c{cfg, out, spec.plot};
    log::info("running " + spec.command);
    it->second(c);

    out.text("config.ini", serialize(cfg));
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    nlohmann::ordered_json m;
    m["tool"] = "ruenergy";
    m["version"] = kVersion;
    m["command"] = spec.command;
    m["seed"] = cfg.sweep.seed;
    m["trials"] = cfg.sweep.trials;
    m["config_hash"] = hash;
    for (auto& [k, v] : c.extra.items()) m[k] = v;
    m["artifacts"] = out.files();
    m["config"] = serialize(cfg);
    std::ofstream mf(out.path("manifest.json"), std::ios::binary);
    if (!mf || !(mf << m.dump(2) << '\n')) throw Error(ErrorCode::Io, "cannot write manifest");
}

int run_and_report(const ExperimentSpec& spec) {
    try {
        run(spec);
        return 0;
    } catch (const Error& e) {
        log::error(e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        log::error(std::string("internal error: ") + e.what());
        return 1;
    }
}

} // namespace ruenergy::experiment
