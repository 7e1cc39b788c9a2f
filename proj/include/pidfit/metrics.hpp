#pragma once

#include <optional>

#include "pidfit/lti.hpp"

namespace pidfit {

/// Performance and robustness summary of one closed loop. settling_time is
/// absent when the loop is unstable or never settles.
struct MetricsReport {
    std::optional<double> settling_time;
    double overshoot_pct = 0.0;
    double iae = 0.0;
    double ms = 0.0;
    double ms_at_omega = 0.0;
    std::optional<double> decay_ratio;
    bool stable = false;
    double final_value = 0.0;
};

/// Band-entry time of the 2% settling criterion (relative to final_value).
/// Throws NumericError if the response never stays inside the band.
double settling_time_2pct(const TimeSeries& y, double final_value);

double percent_overshoot(const TimeSeries& y, double final_value);

/// Trapezoidal integral of |reference - y| over the grid.
double compute_iae(const TimeSeries& y, double reference);

/// Ratio of the second to the first overshoot peak excess above final_value,
/// with 3-point parabolic peak refinement; absent when fewer than two peaks
/// rise above the final value.
std::optional<double> decay_ratio(const TimeSeries& y, double final_value);

struct SensitivityPeak {
    double ms = 0.0;
    double at_omega = 0.0;
};

/// Peak of |S(jw)| = |1/(1+L(jw))| over a log sweep, refined by golden
/// section in log-omega around the grid maximum.
SensitivityPeak max_sensitivity(const TransferFunction& loop, double omega_lo = 1e-3,
                                double omega_hi = 1e3, int n_points = 4000);

/// Pole test for rational systems: all real parts < -1e-9.
bool is_stable_rational(const TransferFunction& closed_loop);

/// Simulation evidence for delayed loops: finite response whose last 10%
/// stays within 2% of the predicted final value.
bool is_stable_series(const TimeSeries& y, double predicted_final);

}  // namespace pidfit
