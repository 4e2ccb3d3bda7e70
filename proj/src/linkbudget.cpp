#include "ruenergy/linkbudget.hpp"

#include "ruenergy/error.hpp"

#include <cmath>
#include <cstdio>

namespace ruenergy::linkbudget {

LinkBudgetInput LinkBudgetInput::from(const ScenarioConfig& cfg, const channel::ChannelGains& g) {
    LinkBudgetInput in;
    in.gain = cfg.channel.large_scale_gain();
    in.bandwidth_hz = cfg.waveform.bandwidth_hz;
    in.noise_power = cfg.channel.noise_psd_w_hz() * in.bandwidth_hz;
    in.lambda0 = g.lambda0;
    in.lambda1 = g.lambda1;
    in.lambda_eff = g.lambda_eff;
    return in;
}

double mimo_se(double p_total, const LinkBudgetInput& in) {
    require(p_total >= 0.0, "transmit power must be >= 0");
    const double snr = in.gain * p_total / in.noise_power;
    return std::log2(1.0 + 0.5 * snr * in.lambda0) + std::log2(1.0 + 0.5 * snr * in.lambda1);
}

double mimo_ptx(double se, const LinkBudgetInput& in) {
    require(se >= 0.0, "spectral efficiency must be >= 0");
    if (!(in.lambda0 > 0.0 && in.lambda1 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rank-deficient channel: MIMO power needs two nonzero eigenvalues, "
                                                "use the SIMO expression");
    const double l0 = in.lambda0;
    const double l1 = in.lambda1;
    const double half_sum = 0.5 * (l0 + l1);
    const double disc = half_sum * half_sum + l0 * l1 * std::expm1(se * std::numbers::ln2);
    return 2.0 * in.noise_power / (in.gain * l0 * l1) * (std::sqrt(disc) - half_sum);
}

double simo_se(double p_tx, const LinkBudgetInput& in) {
    require(p_tx >= 0.0, "transmit power must be >= 0");
    return std::log2(1.0 + in.gain * in.lambda_eff * p_tx / in.noise_power);
}

double simo_ptx(double se, const LinkBudgetInput& in) {
    require(se >= 0.0, "spectral efficiency must be >= 0");
    if (!(in.lambda_eff > 0.0)) throw Error(ErrorCode::InvalidArgument, "effective SIMO gain is zero");
    return in.noise_power / (in.gain * in.lambda_eff) * std::expm1(se * std::numbers::ln2);
}

std::string_view to_string(LinkMode m) {
    switch (m) {
    case LinkMode::SimoCp: return "SIMO-CP";
    case LinkMode::SimoDft: return "SIMO-DFT";
    case LinkMode::MimoCp: return "MIMO-CP";
    }
    return "?";
}

WaveformKind waveform_of(LinkMode m) { return m == LinkMode::SimoDft ? WaveformKind::DftsOfdm : WaveformKind::CpOfdm; }

int active_chains(LinkMode m) { return m == LinkMode::MimoCp ? 2 : 1; }

double power_cap(double backoff_db, const PaProfile& pa) { return pa.p_sat_w() * std::pow(10.0, -backoff_db / 10.0); }

RuPowerBreakdown ru_power(LinkMode mode, double p_tx_per_pa, double backoff_db, const CircuitProfile& circuit,
                          const PaProfile& pa) {
    require(p_tx_per_pa >= 0.0, "transmit power must be >= 0");
    require(backoff_db >= 0.0, "backoff must be >= 0 dB");
    const double cap = power_cap(backoff_db, pa);
    if (p_tx_per_pa > cap * (1.0 + 1e-12)) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "per-PA power %.4g W exceeds the %.4g W cap at %.2f dB backoff", p_tx_per_pa,
                      cap, backoff_db);
        throw InfeasibleError(msg);
    }
    RuPowerBreakdown r;
    r.m_act = active_chains(mode);
    r.p_circ = circuit.total_w(r.m_act);
    const double eta = pa::drain_efficiency(backoff_db, pa);
    for (int i = 0; i < r.m_act; ++i) {
        pa::BackoffPoint pt;
        pt.backoff_db = backoff_db;
        pt.p_tx_w = p_tx_per_pa;
        pt.eta = eta;
        pt.p_dc_w = p_tx_per_pa / eta;
        r.p_pa_total += pt.p_dc_w;
        r.per_pa.push_back(pt);
    }
    r.p_ru = r.p_pa_total + r.p_circ;
    return r;
}

double required_power(LinkMode mode, double se, const LinkBudgetInput& in) {
    return mode == LinkMode::MimoCp ? 0.5 * mimo_ptx(se, in) : simo_ptx(se, in);
}

std::optional<RuPowerBreakdown> ru_power_at(LinkMode mode, double se, const LinkBudgetInput& in,
                                            const ModeBackoff& backoff, const CircuitProfile& circuit,
                                            const PaProfile& pa) {
    const double b = backoff.of(mode);
    const double p = required_power(mode, se, in);
    if (p > power_cap(b, pa)) return std::nullopt;
    return ru_power(mode, p, b, circuit, pa);
}

std::optional<CrossoverPoint> crossover(const LinkBudgetInput& in, LinkMode simo, std::span<const double> grid,
                                        const ModeBackoff& backoff, const CircuitProfile& circuit,
                                        const PaProfile& pa) {
    require(simo != LinkMode::MimoCp, "crossover needs a SIMO mode");
    require(!grid.empty(), "empty SE grid");
    for (std::size_t i = 1; i < grid.size(); ++i) require(grid[i] > grid[i - 1], "SE grid must be increasing");

    const auto diff = [&](double se) -> std::optional<double> {
        const auto a = ru_power_at(simo, se, in, backoff, circuit, pa);
        const auto b = ru_power_at(LinkMode::MimoCp, se, in, backoff, circuit, pa);
        if (!a || !b) return std::nullopt;
        return a->p_ru - b->p_ru;
    };
    const auto point = [&](double se) {
        return CrossoverPoint{se, ru_power_at(simo, se, in, backoff, circuit, pa)->p_ru};
    };

    std::optional<double> prev = diff(grid[0]);
    if (prev && *prev == 0.0) return point(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto cur = diff(grid[i]);
        if (cur && *cur == 0.0) return point(grid[i]);
        if (prev && cur && (*prev < 0.0) != (*cur < 0.0)) {
            double lo = grid[i - 1];
            double hi = grid[i];
            const bool lo_negative = *prev < 0.0;
            while (hi - lo > 1e-4) {
                const double mid = 0.5 * (lo + hi);
                const double d = *diff(mid);
                if ((d < 0.0) == lo_negative) lo = mid;
                else hi = mid;
            }
            return point(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return std::nullopt;
}

std::vector<double> linspace(double lo, double hi, int points) {
    require(points >= 1, "at least one grid point is required");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
    return v;
}

} // namespace ruenergy::linkbudget
