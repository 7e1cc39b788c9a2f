#pragma once

#include <optional>
#include <vector>

#include "pidfit/polynomial.hpp"

namespace pidfit {

/// PID gain triple; the decision variables of the tuner. All gains are
/// constrained non-negative throughout the toolkit.
struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

/// Rational LTI model num/den with an optional pure transport delay (s).
struct TransferFunction {
    Polynomial num;
    Polynomial den;
    double delay = 0.0;

    TransferFunction() = default;
    TransferFunction(Polynomial n, Polynomial d, double delay_s = 0.0);

    bool proper() const { return num.degree() <= den.degree(); }
    bool strictly_proper() const { return num.degree() < den.degree(); }
};

/// Uniform simulation grid on [0, t_final], n_samples points inclusive.
struct SimGrid {
    double t_final = 0.0;
    int n_samples = 0;

    SimGrid() = default;
    SimGrid(double t_final_s, int n);

    double dt() const { return t_final / (n_samples - 1); }
    double time(int i) const { return t_final * i / (n_samples - 1); }

    /// Smallest grid with n_samples >= this->n_samples whose dt divides
    /// the delay to within 1e-9 relative. Identity for delay <= 0.
    SimGrid refined_for_delay(double delay) const;

    bool operator==(const SimGrid&) const = default;
};

/// Uniformly sampled signal. `diverged` marks a simulation that left the
/// finite range; values past the divergence point hold the clamp level.
struct TimeSeries {
    SimGrid grid;
    std::vector<double> values;
    bool diverged = false;
    double divergence_magnitude = 0.0;

    double interp(double t) const;  // linear interpolation on the grid
};

struct FrequencyResponse {
    std::vector<double> omegas;
    std::vector<double> magnitudes;
    std::vector<double> phases_rad;
};

/// Marker-carrying DC gain: finite value, or infinite for integrating
/// systems (den(0)=0, num(0)!=0).
struct DcGain {
    bool infinite = false;
    double value = 0.0;
};

/// C(s) = (Kd s^2 + Kp s + Ki)/s, reduced to a constant when Ki = Kd = 0.
TransferFunction pid_tf(const PidGains& g);

/// Unity-feedback closure T = L/(1+L) for rational loops (delay must be 0).
TransferFunction tf_feedback_unity(const TransferFunction& loop);

TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b);

DcGain dc_gain(const TransferFunction& sys);

/// Unit-step response by exact ZOH discretization of a controllable
/// canonical realization; delay applied as an integer-sample input shift.
/// The returned series may live on a grid refined for the delay.
TimeSeries step_response(const TransferFunction& sys, const SimGrid& grid);

/// Closed-loop unit-step response under unity feedback. Rational plants go
/// through tf_feedback_unity + step_response; delayed plants (or
/// force_discrete) use per-sample loop closure with a trapezoidal integral,
/// backward-difference derivative and a delay buffer on the plant input.
TimeSeries simulate_closed_loop(const TransferFunction& plant, const PidGains& gains,
                                const SimGrid& grid, bool force_discrete = false);

FrequencyResponse freq_response(const TransferFunction& sys,
                                const std::vector<double>& omegas);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace pidfit
