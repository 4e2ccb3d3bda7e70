#pragma once

#include "ruenergy/error.hpp"
#include "ruenergy/linkbudget.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ruenergy::optimizer {

/// Single-ratio EE problem f(p) = A(p) / B(p) in the per-PA power p:
///   A(p) = alpha_oh B sum_j log(1 + c_j p)
///   B(p) = pa_count p / eta + p_circ
struct FractionalProblem {
    std::vector<double> gains{1.0};  // c_j = G lambda_j / (N0 B); one entry for SIMO, two for MIMO
    double eta = 1.0;
    double p_circ = 1.0;
    double alpha_oh = 1.0;
    double bandwidth_hz = 1.0;
    int pa_count = 1;
    double p_min = 0.0;
    double p_max = 1.0;

    void check() const;
};

struct TraceEntry {
    int k = 0;
    double p = 0.0;
    double f = 0.0; // bits/J
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& message, std::vector<TraceEntry> trace)
        : Error(ErrorCode::NonConvergence, message), trace_(std::move(trace)) {}

    const std::vector<TraceEntry>& trace() const { return trace_; }

private:
    std::vector<TraceEntry> trace_;
};

/// Numerator in natural-log units.
double numerator(double p, const FractionalProblem& prob);
double denominator(double p, const FractionalProblem& prob);

/// EE in bits/J.
double objective_f(double p, const FractionalProblem& prob);

/// sqrt(A(p)) / B(p), natural-log units.
double y_update(double p, const FractionalProblem& prob);

/// Quadratic-transform surrogate g(p, y) = 2 y sqrt(A(p)) - y^2 B(p).
double surrogate(double p, double y, const FractionalProblem& prob);

/// A'(p) / sqrt(A(p)) - y pa_count / eta; strictly decreasing in p.
double foc(double p, double y, const FractionalProblem& prob);

/// Root of foc(., y) on [p_min, p_max], clamped to the bound the sign of the
/// condition points to.
double p_update(double y, const FractionalProblem& prob);

struct Solution {
    double p_star = 0.0;
    double y_star = 0.0;  // natural-log units
    double ee = 0.0;      // bits/J
    double se = 0.0;      // bits/s/Hz at p_star
    double p_ru = 0.0;    // W
    int iterations = 0;
    std::vector<TraceEntry> trace;
};

struct IterationLimits {
    double tolerance = 1e-9; // relative to p_max
    int max_iterations = 1000;
};

/// Alternating y/p updates from p0 = (p_min + p_max) / 2.
Solution maximize_ee(const FractionalProblem& prob, IterationLimits limits = {});

enum class TransmissionMode { FullMimo, SwitchCp, SwitchDft };

std::string_view to_string(TransmissionMode m);
/// Link modes a transmission mode may choose from.
std::vector<linkbudget::LinkMode> candidates(TransmissionMode m);

struct EeResult {
    TransmissionMode mode = TransmissionMode::FullMimo;
    linkbudget::LinkMode inner = linkbudget::LinkMode::MimoCp;
    double b_db = 0.0;
    double p_star = 0.0;  // per PA
    double y_star = 0.0;
    double ee = 0.0;
    double se = 0.0;
    double p_ru = 0.0;
    int iterations = 0;
    std::vector<TraceEntry> trace;
};

/// Scenario-level quantities shared by all modes.
struct EeContext {
    linkbudget::LinkBudgetInput link;
    linkbudget::ModeBackoff backoff;
    CircuitProfile circuit;
    PaProfile pa;
    double alpha_oh = 0.9;
    IterationLimits limits;

    static EeContext from(const ScenarioConfig& cfg, const channel::ChannelGains& gains,
                          const linkbudget::ModeBackoff& backoff);
};

/// Problem for one link mode at backoff `b_db`. With a target SE the per-PA
/// power floor is the power that reaches it.
FractionalProblem build_problem(const EeContext& ctx, linkbudget::LinkMode lm, double b_db,
                                std::optional<double> target_se = std::nullopt);

/// EE-optimal operating point of one link mode at its minimum backoff.
EeResult solve_link_mode(const EeContext& ctx, linkbudget::LinkMode lm, std::optional<double> target_se = std::nullopt);

/// Best EE over the candidates of `mode`. Throws InfeasibleError when no
/// candidate can meet the target.
EeResult solve_mode(const EeContext& ctx, TransmissionMode mode, std::optional<double> target_se = std::nullopt);

struct SweepRow {
    double se = 0.0;
    TransmissionMode mode = TransmissionMode::FullMimo;
    std::optional<linkbudget::LinkMode> inner;
    double b_db = 0.0;
    double p_tx_w = 0.0;
    double p_ru_w = 0.0;
    double ee = 0.0;
    bool feasible = false;
};

/// For each SE and mode: the candidate with the lowest RU power that reaches
/// the SE within its cap. Infeasible cells are marked, not thrown.
std::vector<SweepRow> sweep_modes(const EeContext& ctx, std::span<const double> se_grid);

struct BackoffGridPoint {
    double b_db = 0.0;
    double ee = 0.0;
};

/// EE optimum of `lm` on a backoff grid from its minimum backoff upwards;
/// checks that the minimum backoff is the best choice.
std::vector<BackoffGridPoint> backoff_grid(const EeContext& ctx, linkbudget::LinkMode lm, double step_db,
                                           double max_db);

} // namespace ruenergy::optimizer
