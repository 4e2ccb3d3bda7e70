#include "ruenergy/ruenergy.h"

#include "ruenergy/channel.hpp"
#include "ruenergy/experiment.hpp"
#include "ruenergy/optimizer.hpp"
#include "ruenergy/receiver.hpp"
#include "ruenergy/version.hpp"
#include "ruenergy/waveform.hpp"

#include <cstring>
#include <new>
#include <string>

struct rue_scenario {
    ruenergy::ScenarioConfig cfg;
};

struct rue_sweep {
    std::vector<ruenergy::optimizer::SweepRow> rows;
};

namespace {

using namespace ruenergy;

thread_local std::string g_last_error;

rue_status fail(rue_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class Fn>
rue_status guard(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RUE_OK;
    } catch (const Error& e) {
        return fail(static_cast<rue_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(RUE_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RUE_ERR_INTERNAL, e.what());
    }
}

#define RUE_CHECK_ARG(cond)                                                                                   \
    do {                                                                                                       \
        if (!(cond)) return fail(RUE_ERR_INVALID_ARGUMENT, "invalid argument: " #cond);                       \
    } while (0)

WaveformKind kind_of(rue_waveform w) { return w == RUE_DFTS_OFDM ? WaveformKind::DftsOfdm : WaveformKind::CpOfdm; }

linkbudget::LinkBudgetInput to_cpp(const rue_link_input& in) {
    return {in.gain, in.noise_power, in.lambda0, in.lambda1, in.lambda_eff, in.bandwidth_hz};
}

optimizer::EeContext context(const ScenarioConfig& cfg, double b_cp, double b_dft) {
    const auto& o = cfg.optimizer;
    const auto gains = channel::channel_statistics(o.channel_stats, o.channel_draws, cfg.sweep.seed);
    return optimizer::EeContext::from(cfg, gains, {b_cp, b_dft});
}

} // namespace

extern "C" {

const char* rue_version(void) { return kVersion; }

const char* rue_last_error(void) { return g_last_error.c_str(); }

rue_status rue_scenario_default(rue_scenario** out) {
    RUE_CHECK_ARG(out);
    return guard([&] { *out = new rue_scenario{default_scenario()}; });
}

rue_status rue_scenario_load(const char* path, rue_scenario** out) {
    RUE_CHECK_ARG(path && out);
    return guard([&] { *out = new rue_scenario{load_scenario(path)}; });
}

rue_status rue_scenario_parse(const char* text, rue_scenario** out) {
    RUE_CHECK_ARG(text && out);
    return guard([&] { *out = new rue_scenario{parse_scenario(text)}; });
}

rue_status rue_scenario_set(rue_scenario* s, const char* key, const char* value) {
    RUE_CHECK_ARG(s && key && value);
    return guard([&] {
        ScenarioConfig next = s->cfg;
        set_value(next, key, value);
        validate(next);
        s->cfg = std::move(next);
    });
}

rue_status rue_scenario_get(const rue_scenario* s, const char* key, char* buf, size_t len, size_t* needed) {
    RUE_CHECK_ARG(s && key && (buf || len == 0));
    return guard([&] {
        const std::string v = get_value(s->cfg, key);
        if (needed) *needed = v.size() + 1;
        if (len > 0) {
            const size_t n = std::min(len - 1, v.size());
            std::memcpy(buf, v.data(), n);
            buf[n] = '\0';
        }
    });
}

rue_status rue_scenario_save(const rue_scenario* s, const char* path) {
    RUE_CHECK_ARG(s && path);
    return guard([&] { save_scenario(s->cfg, path); });
}

uint64_t rue_scenario_hash(const rue_scenario* s) { return s ? config_hash(s->cfg) : 0; }

void rue_scenario_free(rue_scenario* s) { delete s; }

rue_status rue_rapp_gain(const rue_scenario* s, double re, double im, double* out_re, double* out_im) {
    RUE_CHECK_ARG(s && out_re && out_im);
    return guard([&] {
        const cplx y = pa::rapp_gain({re, im}, pa::RappModel::from(s->cfg.pa));
        *out_re = y.real();
        *out_im = y.imag();
    });
}

rue_status rue_measure_evm(const rue_scenario* s, rue_waveform w, double backoff_db, int trials, uint64_t seed,
                           double* evm_db) {
    RUE_CHECK_ARG(s && evm_db);
    return guard([&] {
        const auto setup = receiver::LinkSetup::from(s->cfg);
        *evm_db = receiver::measure_evm(setup, kind_of(w), backoff_db, trials, seed, s->cfg.sweep.threads).evm_db;
    });
}

rue_status rue_min_backoff(const rue_scenario* s, rue_waveform w, double evm_req_db, int trials, uint64_t seed,
                           double* b_min_db) {
    RUE_CHECK_ARG(s && b_min_db);
    return guard([&] {
        const auto setup = receiver::LinkSetup::from(s->cfg);
        const auto& o = s->cfg.optimizer;
        *b_min_db = receiver::min_backoff(setup, kind_of(w), evm_req_db, trials, seed,
                                          {o.backoff_search_max_db, o.backoff_tolerance_db}, s->cfg.sweep.threads);
    });
}

rue_status rue_papr_quantile(const rue_scenario* s, rue_waveform w, size_t symbols, uint64_t seed, double prob,
                             double* papr_db) {
    RUE_CHECK_ARG(s && papr_db && symbols > 0);
    return guard([&] {
        auto p = waveform::FrameParams::from(s->cfg);
        p.oversample = s->cfg.waveform.papr_oversample;
        *papr_db = waveform::ccdf_quantile(waveform::papr_samples(p, kind_of(w), symbols, seed, s->cfg.sweep.threads),
                                           prob);
    });
}

rue_status rue_mimo_se(const rue_link_input* in, double p_total, double* se) {
    RUE_CHECK_ARG(in && se);
    return guard([&] { *se = linkbudget::mimo_se(p_total, to_cpp(*in)); });
}

rue_status rue_mimo_ptx(const rue_link_input* in, double se, double* p_total) {
    RUE_CHECK_ARG(in && p_total);
    return guard([&] { *p_total = linkbudget::mimo_ptx(se, to_cpp(*in)); });
}

rue_status rue_simo_se(const rue_link_input* in, double p_tx, double* se) {
    RUE_CHECK_ARG(in && se);
    return guard([&] { *se = linkbudget::simo_se(p_tx, to_cpp(*in)); });
}

rue_status rue_simo_ptx(const rue_link_input* in, double se, double* p_tx) {
    RUE_CHECK_ARG(in && p_tx);
    return guard([&] { *p_tx = linkbudget::simo_ptx(se, to_cpp(*in)); });
}

rue_status rue_link_input_from(const rue_scenario* s, rue_link_input* in) {
    RUE_CHECK_ARG(s && in);
    return guard([&] {
        const auto& o = s->cfg.optimizer;
        const auto g = channel::channel_statistics(o.channel_stats, o.channel_draws, s->cfg.sweep.seed);
        const auto l = linkbudget::LinkBudgetInput::from(s->cfg, g);
        *in = {l.gain, l.noise_power, l.lambda0, l.lambda1, l.lambda_eff, l.bandwidth_hz};
    });
}

rue_status rue_maximize_ee(const rue_fp_problem* prob, rue_fp_result* out) {
    RUE_CHECK_ARG(prob && out && prob->gains && prob->num_gains > 0);
    return guard([&] {
        optimizer::FractionalProblem p;
        p.gains.assign(prob->gains, prob->gains + prob->num_gains);
        p.eta = prob->eta;
        p.p_circ = prob->p_circ;
        p.alpha_oh = prob->alpha_oh;
        p.bandwidth_hz = prob->bandwidth_hz;
        p.pa_count = prob->pa_count;
        p.p_min = prob->p_min;
        p.p_max = prob->p_max;
        const auto r = optimizer::maximize_ee(p);
        *out = {r.p_star, r.y_star, r.ee, r.se, r.p_ru, r.iterations};
    });
}

rue_status rue_solve_mode(const rue_scenario* s, rue_tx_mode mode, double b_min_cp_db, double b_min_dft_db,
                          rue_ee_result* out) {
    RUE_CHECK_ARG(s && out && mode >= RUE_FULL_MIMO && mode <= RUE_SWITCH_DFT);
    return guard([&] {
        const auto ctx = context(s->cfg, b_min_cp_db, b_min_dft_db);
        const auto r = optimizer::solve_mode(ctx, static_cast<optimizer::TransmissionMode>(mode));
        *out = {static_cast<rue_tx_mode>(r.mode), static_cast<rue_link_mode>(r.inner), r.b_db, r.p_star, r.y_star,
                r.ee, r.se, r.p_ru, r.iterations};
    });
}

rue_status rue_sweep_run(const rue_scenario* s, double b_min_cp_db, double b_min_dft_db, const double* se,
                         size_t count, rue_sweep** out) {
    RUE_CHECK_ARG(s && se && count > 0 && out);
    return guard([&] {
        const auto ctx = context(s->cfg, b_min_cp_db, b_min_dft_db);
        auto rows = optimizer::sweep_modes(ctx, std::span<const double>(se, count));
        *out = new rue_sweep{std::move(rows)};
    });
}

size_t rue_sweep_size(const rue_sweep* sw) { return sw ? sw->rows.size() : 0; }

rue_status rue_sweep_row_at(const rue_sweep* sw, size_t index, rue_sweep_row* out) {
    RUE_CHECK_ARG(sw && out && index < sw->rows.size());
    const auto& r = sw->rows[index];
    *out = {r.se,
            static_cast<rue_tx_mode>(r.mode),
            r.inner.has_value() ? 1 : 0,
            static_cast<rue_link_mode>(r.inner.value_or(linkbudget::LinkMode::MimoCp)),
            r.b_db,
            r.p_tx_w,
            r.p_ru_w,
            r.ee,
            r.feasible ? 1 : 0};
    g_last_error.clear();
    return RUE_OK;
}

void rue_sweep_free(rue_sweep* sw) { delete sw; }

int rue_run_experiment(const rue_experiment* spec) {
    if (!spec || !spec->command) {
        fail(RUE_ERR_INVALID_ARGUMENT, "missing experiment command");
        return 2;
    }
    experiment::ExperimentSpec e;
    e.command = spec->command;
    if (spec->config_path) e.config_path = spec->config_path;
    for (size_t i = 0; i < spec->num_overrides; ++i)
        if (spec->overrides && spec->overrides[i]) e.overrides.emplace_back(spec->overrides[i]);
    if (spec->out_dir) e.out_dir = spec->out_dir;
    if (spec->has_seed) e.seed = spec->seed;
    if (spec->trials > 0) e.trials = spec->trials;
    e.plot = spec->plot != 0;
    return experiment::run_and_report(e);
}

} // extern "C"
