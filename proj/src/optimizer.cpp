#include "ruenergy/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace ruenergy::optimizer {

using linkbudget::LinkMode;

void FractionalProblem::check() const {
    require(!gains.empty() && gains.size() <= 2, "a problem has one (SIMO) or two (MIMO) gains");
    for (double c : gains) require(c >= 0.0 && std::isfinite(c), "channel gains must be finite and >= 0");
    require(eta > 0.0 && eta <= 1.0, "drain efficiency must be in (0, 1]");
    require(p_circ > 0.0, "circuit power must be > 0");
    require(alpha_oh > 0.0 && bandwidth_hz > 0.0, "overhead and bandwidth must be > 0");
    require(pa_count >= 1, "at least one active PA is required");
    require(p_min >= 0.0 && p_min <= p_max, "power bounds must satisfy 0 <= p_min <= p_max");
}

double numerator(double p, const FractionalProblem& prob) {
    double acc = 0.0;
    for (double c : prob.gains) acc += std::log1p(c * p);
    return prob.alpha_oh * prob.bandwidth_hz * acc;
}

double denominator(double p, const FractionalProblem& prob) { return prob.pa_count * p / prob.eta + prob.p_circ; }

double objective_f(double p, const FractionalProblem& prob) {
    return numerator(p, prob) / std::numbers::ln2 / denominator(p, prob);
}

double y_update(double p, const FractionalProblem& prob) {
    return std::sqrt(numerator(p, prob)) / denominator(p, prob);
}

double surrogate(double p, double y, const FractionalProblem& prob) {
    return 2.0 * y * std::sqrt(numerator(p, prob)) - y * y * denominator(p, prob);
}

double foc(double p, double y, const FractionalProblem& prob) {
    const double a = numerator(p, prob);
    const double slope_b = prob.pa_count / prob.eta;
    if (a <= 0.0) return std::numeric_limits<double>::infinity();
    double da = 0.0;
    for (double c : prob.gains) da += c / (1.0 + c * p);
    da *= prob.alpha_oh * prob.bandwidth_hz;
    return da / std::sqrt(a) - y * slope_b;
}

double p_update(double y, const FractionalProblem& prob) {
    double lo = prob.p_min;
    double hi = prob.p_max;
    if (foc(hi, y, prob) >= 0.0) return hi;
    if (foc(lo, y, prob) <= 0.0) return lo;
    for (int i = 0; i < 400 && hi - lo > 1e-10 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (foc(mid, y, prob) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

Solution maximize_ee(const FractionalProblem& prob, IterationLimits limits) {
    prob.check();
    const double eps = limits.tolerance * prob.p_max;
    double p = 0.5 * (prob.p_min + prob.p_max);
    Solution s;
    s.trace.push_back({0, p, objective_f(p, prob)});
    double y = y_update(p, prob);
    for (int k = 1;; ++k) {
        if (k > limits.max_iterations) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "EE iteration did not converge in %d iterations", limits.max_iterations);
            throw NonConvergenceError(msg, std::move(s.trace));
        }
        const double next = p_update(y, prob);
        s.trace.push_back({k, next, objective_f(next, prob)});
        const double step = std::abs(next - p);
        p = next;
        s.iterations = k;
        if (step <= eps) break;
        y = y_update(p, prob);
    }
    s.p_star = p;
    s.y_star = y_update(p, prob);
    s.ee = objective_f(p, prob);
    double se = 0.0;
    for (double c : prob.gains) se += std::log2(1.0 + c * p);
    s.se = se;
    s.p_ru = denominator(p, prob);
    return s;
}

std::string_view to_string(TransmissionMode m) {
    switch (m) {
    case TransmissionMode::FullMimo: return "Full-MIMO";
    case TransmissionMode::SwitchCp: return "Switch-CP";
    case TransmissionMode::SwitchDft: return "Switch-DFT";
    }
    return "?";
}

std::vector<LinkMode> candidates(TransmissionMode m) {
    switch (m) {
    case TransmissionMode::FullMimo: return {LinkMode::MimoCp};
    case TransmissionMode::SwitchCp: return {LinkMode::SimoCp, LinkMode::MimoCp};
    case TransmissionMode::SwitchDft: return {LinkMode::SimoDft, LinkMode::MimoCp};
    }
    return {};
}

EeContext EeContext::from(const ScenarioConfig& cfg, const channel::ChannelGains& gains,
                          const linkbudget::ModeBackoff& backoff) {
    EeContext ctx;
    ctx.link = linkbudget::LinkBudgetInput::from(cfg, gains);
    ctx.backoff = backoff;
    ctx.circuit = cfg.circuit;
    ctx.pa = cfg.pa;
    ctx.alpha_oh = cfg.optimizer.overhead_factor;
    ctx.limits.tolerance = cfg.optimizer.tolerance;
    ctx.limits.max_iterations = cfg.optimizer.max_iterations;
    return ctx;
}

FractionalProblem build_problem(const EeContext& ctx, LinkMode lm, double b_db, std::optional<double> target_se) {
    const auto& in = ctx.link;
    FractionalProblem prob;
    const double scale = in.gain / in.noise_power;
    if (lm == LinkMode::MimoCp) prob.gains = {scale * in.lambda0, scale * in.lambda1};
    else prob.gains = {scale * in.lambda_eff};
    prob.pa_count = linkbudget::active_chains(lm);
    prob.eta = pa::drain_efficiency(b_db, ctx.pa);
    prob.p_circ = ctx.circuit.total_w(prob.pa_count);
    prob.alpha_oh = ctx.alpha_oh;
    prob.bandwidth_hz = in.bandwidth_hz;
    prob.p_max = linkbudget::power_cap(b_db, ctx.pa);
    prob.p_min = target_se ? linkbudget::required_power(lm, *target_se, in) : 0.0;
    if (prob.p_min > prob.p_max) {
        char msg[200];
        std::snprintf(msg, sizeof msg,
                      "%s: target SE %.3f bits/s/Hz needs %.4g W per PA, above the %.4g W saturation cap at %.2f dB",
                      std::string(linkbudget::to_string(lm)).c_str(), *target_se, prob.p_min, prob.p_max, b_db);
        throw InfeasibleError(msg);
    }
    return prob;
}

EeResult solve_link_mode(const EeContext& ctx, LinkMode lm, std::optional<double> target_se) {
    const double b = ctx.backoff.of(lm);
    const auto sol = maximize_ee(build_problem(ctx, lm, b, target_se), ctx.limits);
    EeResult r;
    r.inner = lm;
    r.b_db = b;
    r.p_star = sol.p_star;
    r.y_star = sol.y_star;
    r.ee = sol.ee;
    r.se = sol.se;
    r.p_ru = sol.p_ru;
    r.iterations = sol.iterations;
    r.trace = sol.trace;
    return r;
}

EeResult solve_mode(const EeContext& ctx, TransmissionMode mode, std::optional<double> target_se) {
    std::optional<EeResult> best;
    std::string reasons;
    for (LinkMode lm : candidates(mode)) {
        try {
            auto r = solve_link_mode(ctx, lm, target_se);
            if (!best || r.ee > best->ee) best = std::move(r);
        } catch (const InfeasibleError& e) {
            reasons += reasons.empty() ? e.what() : std::string("; ") + e.what();
        }
    }
    if (!best) throw InfeasibleError(std::string(to_string(mode)) + " has no feasible link mode: " + reasons);
    best->mode = mode;
    return *best;
}

std::vector<SweepRow> sweep_modes(const EeContext& ctx, std::span<const double> se_grid) {
    require(!se_grid.empty(), "empty SE grid");
    const TransmissionMode modes[] = {TransmissionMode::FullMimo, TransmissionMode::SwitchCp,
                                      TransmissionMode::SwitchDft};
    std::vector<SweepRow> rows;
    rows.reserve(se_grid.size() * 3);
    for (double se : se_grid) {
        for (auto mode : modes) {
            SweepRow row;
            row.se = se;
            row.mode = mode;
            for (LinkMode lm : candidates(mode)) {
                std::optional<linkbudget::RuPowerBreakdown> r;
                try {
                    r = linkbudget::ru_power_at(lm, se, ctx.link, ctx.backoff, ctx.circuit, ctx.pa);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::InvalidArgument) throw;
                }
                if (!r || (row.feasible && r->p_ru >= row.p_ru_w)) continue;
                row.feasible = true;
                row.inner = lm;
                row.b_db = ctx.backoff.of(lm);
                row.p_tx_w = r->per_pa.front().p_tx_w;
                row.p_ru_w = r->p_ru;
            }
            if (row.feasible) row.ee = ctx.alpha_oh * ctx.link.bandwidth_hz * se / row.p_ru_w;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<BackoffGridPoint> backoff_grid(const EeContext& ctx, LinkMode lm, double step_db, double max_db) {
    require(step_db > 0.0, "backoff grid step must be > 0");
    std::vector<BackoffGridPoint> out;
    const double b0 = ctx.backoff.of(lm);
    for (int i = 0;; ++i) {
        const double b = b0 + i * step_db;
        if (b > max_db + 1e-9) break;
        const auto sol = maximize_ee(build_problem(ctx, lm, b), ctx.limits);
        out.push_back({b, sol.ee});
    }
    return out;
}

} // namespace ruenergy::optimizer
