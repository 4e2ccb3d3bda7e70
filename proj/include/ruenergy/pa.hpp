#pragma once

#include "ruenergy/config.hpp"
#include "ruenergy/dsp.hpp"

#include <span>

namespace ruenergy::pa {

/// Memoryless modified-Rapp PA in normalized amplitude units. Inside the
/// signal chain the saturation amplitude is 1; absolute powers only enter
/// through BackoffPoint bookkeeping.
struct RappModel {
    double a_sat = 1.0;
    double smoothness = 3.0;
    double alpha = 0.0;
    double beta = 0.1;
    double q1 = 3.8;
    double q2 = 2.5;

    static RappModel from(const PaProfile& p);
};

/// AM/AM: r (1 + (r/A_sat)^(2s))^(-1/(2s)).
double am_am(double r, const RappModel& m);
/// AM/PM: alpha r^q1 / (1 + (r/beta)^q2), radians.
double am_pm(double r, const RappModel& m);

/// Complex gain q(x) = g(|x|)/|x| exp(j theta(|x|)); 1 at x = 0.
cplx complex_gain(cplx x, const RappModel& m);

/// PA output q(x) x for one sample.
cplx rapp_gain(cplx x, const RappModel& m);

CVec amplify(std::span<const cplx> x, const RappModel& m);

struct BackoffResult {
    double scale = 1.0;      // drive = scale * input
    CVec drive;              // PA input
    CVec output;             // PA output
    double achieved_db = 0;  // achieved output backoff
    int iterations = 0;
};

/// Largest input drive the backoff search will apply, relative to A_sat (dB).
inline constexpr double kMaxDriveDb = 40.0;

/// Scales x so the mean PA output power sits `backoff_db` below A_sat^2,
/// within `tolerance_db`. Throws InfeasibleError naming the smallest
/// reachable backoff when the target exceeds what the drive limit allows.
BackoffResult apply_backoff(std::span<const cplx> x, double backoff_db, const RappModel& m,
                            double tolerance_db = 1e-3);

/// Least-squares linear gain a = <out, in> / |in|^2 (Bussgang).
cplx bussgang_gain(std::span<const cplx> in, std::span<const cplx> out);

/// |out - a in|^2 / |out|^2 with a from bussgang_gain.
double distortion_ratio(std::span<const cplx> in, std::span<const cplx> out);

struct BackoffPoint {
    double backoff_db = 0.0;
    double p_tx_w = 0.0;  // per-PA output power at this backoff
    double p_dc_w = 0.0;
    double eta = 0.0;
};

/// Drain efficiency eta_sat * 10^(-b/20), clamped to (0, eta_sat].
double drain_efficiency(double backoff_db, const PaProfile& p);

BackoffPoint pa_dc_power(double backoff_db, const PaProfile& p);

} // namespace ruenergy::pa
