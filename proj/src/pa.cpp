#include "ruenergy/pa.hpp"

#include "ruenergy/error.hpp"

#include <cmath>
#include <cstdio>

namespace ruenergy::pa {

RappModel RappModel::from(const PaProfile& p) {
    RappModel m;
    m.smoothness = p.smoothness;
    m.alpha = p.am_pm_alpha;
    m.beta = p.am_pm_beta;
    m.q1 = p.am_pm_q1;
    m.q2 = p.am_pm_q2;
    return m;
}

double am_am(double r, const RappModel& m) {
    const double two_s = 2.0 * m.smoothness;
    return r * std::pow(1.0 + std::pow(r / m.a_sat, two_s), -1.0 / two_s);
}

double am_pm(double r, const RappModel& m) {
    if (r == 0.0) return 0.0;
    return m.alpha * std::pow(r, m.q1) / (1.0 + std::pow(r / m.beta, m.q2));
}

cplx complex_gain(cplx x, const RappModel& m) {
    const double r = std::abs(x);
    if (r == 0.0) return {1.0, 0.0};
    return std::polar(am_am(r, m) / r, am_pm(r, m));
}

cplx rapp_gain(cplx x, const RappModel& m) { return complex_gain(x, m) * x; }

CVec amplify(std::span<const cplx> x, const RappModel& m) {
    CVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = rapp_gain(x[i], m);
    return out;
}

namespace {

double output_power(std::span<const cplx> x, double scale, const RappModel& m) {
    double acc = 0.0;
    for (const auto& v : x) {
        const double r = scale * std::abs(v);
        const double g = am_am(r, m);
        acc += g * g;
    }
    return acc / static_cast<double>(x.size());
}

} // namespace

BackoffResult apply_backoff(std::span<const cplx> x, double backoff_db, const RappModel& m, double tolerance_db) {
    require(backoff_db >= 0.0, "backoff must be >= 0 dB");
    require(!x.empty(), "backoff of an empty frame");
    const double in_power = dsp::mean_power(x);
    require(in_power > 0.0, "backoff of an all-zero frame");

    const double ref = m.a_sat * m.a_sat;
    const double target = ref * std::pow(10.0, -backoff_db / 10.0);
    const double ln_target = std::log(target);
    const double tol = tolerance_db * std::log(10.0) / 10.0;
    const double u_max = std::log(m.a_sat * std::pow(10.0, kMaxDriveDb / 20.0) / std::sqrt(in_power));

    // Search in u = ln(scale). F(u) = ln P_out - ln target is increasing with
    // slope in (0, 2]; starting from the linear guess it approaches the root
    // from below, so the secant steps never overshoot.
    const auto residual = [&](double u) { return std::log(output_power(x, std::exp(u), m)) - ln_target; };

    double u = 0.5 * (ln_target - std::log(in_power));
    double f = residual(u);
    double u_prev = u;
    double f_prev = f;
    int it = 1;
    bool at_limit = false;
    constexpr int kMaxIterations = 100;
    while (std::abs(f) > tol) {
        if (it >= kMaxIterations) throw Error(ErrorCode::NonConvergence, "backoff scale search did not converge");
        double next;
        const double slope = it > 1 ? (f - f_prev) / (u - u_prev) : 0.0;
        if (it > 1 && slope > 1e-9 && std::isfinite(slope)) next = u - f / slope;
        else next = u - f / 2.0; // fixed-point step scale *= sqrt(target / P)
        if (f > 0.0) next = std::min(next, u); // only reachable when started above the root
        if (next >= u_max) {
            if (at_limit) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "backoff %.3f dB is unreachable; the smallest reachable backoff is %.3f dB", backoff_db,
                              backoff_db - f * 10.0 / std::log(10.0));
                throw InfeasibleError(msg);
            }
            next = u_max;
            at_limit = true;
        }
        u_prev = u;
        f_prev = f;
        u = next;
        f = residual(u);
        ++it;
        if (at_limit && f < -tol && u >= u_max) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "backoff %.3f dB is unreachable; the smallest reachable backoff is %.3f dB",
                          backoff_db, backoff_db - f * 10.0 / std::log(10.0));
            throw InfeasibleError(msg);
        }
    }

    BackoffResult res;
    res.scale = std::exp(u);
    res.drive.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) res.drive[i] = res.scale * x[i];
    res.output = amplify(res.drive, m);
    res.achieved_db = -10.0 * std::log10(dsp::mean_power(res.output) / ref);
    res.iterations = it;
    return res;
}

cplx bussgang_gain(std::span<const cplx> in, std::span<const cplx> out) {
    require(in.size() == out.size(), "input and output lengths differ");
    cplx cross{};
    double energy = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        cross += out[i] * std::conj(in[i]);
        energy += std::norm(in[i]);
    }
    require(energy > 0.0, "Bussgang gain of a zero input");
    return cross / energy;
}

double distortion_ratio(std::span<const cplx> in, std::span<const cplx> out) {
    const cplx a = bussgang_gain(in, out);
    double dist = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) dist += std::norm(out[i] - a * in[i]);
    return dist / dsp::energy(out);
}

double drain_efficiency(double backoff_db, const PaProfile& p) {
    const double eta = p.eta_sat * std::pow(10.0, -backoff_db / 20.0);
    return std::min(eta, p.eta_sat);
}

BackoffPoint pa_dc_power(double backoff_db, const PaProfile& p) {
    require(backoff_db >= 0.0, "backoff must be >= 0 dB");
    BackoffPoint pt;
    pt.backoff_db = backoff_db;
    pt.p_tx_w = p.p_sat_w() * std::pow(10.0, -backoff_db / 10.0);
    pt.eta = drain_efficiency(backoff_db, p);
    pt.p_dc_w = pt.p_tx_w / pt.eta;
    return pt;
}

} // namespace ruenergy::pa
