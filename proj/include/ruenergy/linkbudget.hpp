#pragma once

#include "ruenergy/channel.hpp"
#include "ruenergy/config.hpp"
#include "ruenergy/pa.hpp"
#include "ruenergy/waveform.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ruenergy::linkbudget {

struct LinkBudgetInput {
    double gain = 1.0;        // G, linear
    double noise_power = 1.0; // N0 B, W
    double lambda0 = 1.0;
    double lambda1 = 1.0;
    double lambda_eff = 1.0;
    double bandwidth_hz = 20e6;

    static LinkBudgetInput from(const ScenarioConfig& cfg, const channel::ChannelGains& g);
};

/// 2x2 MIMO, equal power over both antennas: sum_j log2(1 + (G p / N0B / 2) lambda_j).
/// `p_total` is the total transmit power.
double mimo_se(double p_total, const LinkBudgetInput& in);
/// Positive root of the 2x2 quadratic: total power that reaches `se`.
/// Throws when lambda1 is zero; use the SIMO path instead.
double mimo_ptx(double se, const LinkBudgetInput& in);

double simo_se(double p_tx, const LinkBudgetInput& in);
/// (N0B / (G lambda_eff)) (2^se - 1).
double simo_ptx(double se, const LinkBudgetInput& in);

enum class LinkMode { SimoCp, SimoDft, MimoCp };

std::string_view to_string(LinkMode m);
WaveformKind waveform_of(LinkMode m);
int active_chains(LinkMode m);

/// Minimum EVM-compliant output backoff per waveform.
struct ModeBackoff {
    double cp_db = 0.0;
    double dft_db = 0.0;

    double of(LinkMode m) const { return waveform_of(m) == WaveformKind::DftsOfdm ? dft_db : cp_db; }
};

struct RuPowerBreakdown {
    double p_pa_total = 0.0;
    double p_circ = 0.0;
    double p_ru = 0.0;
    int m_act = 0;
    std::vector<pa::BackoffPoint> per_pa;
};

/// Per-PA output power cap p_sat 10^(-b/10).
double power_cap(double backoff_db, const PaProfile& pa);

/// RU power for `mode` with every active PA at `p_tx_per_pa`. The PA
/// efficiency is the drain efficiency at the mode's backoff `backoff_db`.
/// Throws InfeasibleError when p_tx_per_pa exceeds the cap at that backoff.
RuPowerBreakdown ru_power(LinkMode mode, double p_tx_per_pa, double backoff_db, const CircuitProfile& circuit,
                          const PaProfile& pa);

/// Per-PA transmit power that reaches `se` in `mode`.
double required_power(LinkMode mode, double se, const LinkBudgetInput& in);

/// RU power needed for `se`, or nullopt when the per-PA cap is exceeded.
std::optional<RuPowerBreakdown> ru_power_at(LinkMode mode, double se, const LinkBudgetInput& in,
                                            const ModeBackoff& backoff, const CircuitProfile& circuit,
                                            const PaProfile& pa);

struct CrossoverPoint {
    double se = 0.0;
    double p_ru = 0.0;
};

/// SE where P_RU(simo) - P_RU(MIMO-CP) changes sign on `grid`, refined by
/// bisection to 1e-4 bits/s/Hz. Only grid intervals where both modes are
/// feasible are considered. nullopt when no sign change exists.
std::optional<CrossoverPoint> crossover(const LinkBudgetInput& in, LinkMode simo, std::span<const double> grid,
                                        const ModeBackoff& backoff, const CircuitProfile& circuit,
                                        const PaProfile& pa);

/// `points` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int points);

} // namespace ruenergy::linkbudget
