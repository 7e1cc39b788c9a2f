#include "pidfit/baselines.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "pidfit/errors.hpp"
#include "pidfit/reference.hpp"

namespace pidfit {

namespace {

constexpr double kPi = std::numbers::pi;

double raw_rational_phase(const TransferFunction& g, double w) {
    const std::complex<double> jw(0.0, w);
    return std::arg(g.num(jw) / g.den(jw));
}

// Raw phase shifted by the 2*pi multiple that lands nearest `reference`.
double phase_near(double raw, double reference) {
    const double k = std::round((reference - raw) / (2.0 * kPi));
    return raw + 2.0 * kPi * k;
}

double gain_at(const TransferFunction& g, double w) {
    const std::complex<double> jw(0.0, w);
    return std::abs(g.num(jw) / g.den(jw));
}

}  // namespace

UltimatePoint ultimate_point(const TransferFunction& plant) {
    const int n = 4000;
    const std::vector<double> w = log_spaced(1e-4, 1e4, n);

    // unwrapped phase of the rational part; the delay term -w*L is exact
    std::vector<double> phase(static_cast<std::size_t>(n));
    phase[0] = raw_rational_phase(plant, w[0]) - w[0] * plant.delay;
    double prev_rat = raw_rational_phase(plant, w[0]);
    for (int i = 1; i < n; ++i) {
        const double rat = phase_near(raw_rational_phase(plant, w[static_cast<std::size_t>(i)]),
                                      prev_rat);
        phase[static_cast<std::size_t>(i)] = rat - w[static_cast<std::size_t>(i)] * plant.delay;
        prev_rat = rat;
    }

    int cross = -1;
    for (int i = 1; i < n; ++i)
        if (phase[static_cast<std::size_t>(i) - 1] > -kPi &&
            phase[static_cast<std::size_t>(i)] <= -kPi) {
            cross = i;
            break;
        }
    if (cross < 0)
        throw NumericError("ultimate_point: phase never crosses -180 degrees in the sweep");

    double a = w[static_cast<std::size_t>(cross) - 1];
    double b = w[static_cast<std::size_t>(cross)];
    double pa_rat = phase_near(raw_rational_phase(plant, a),
                               phase[static_cast<std::size_t>(cross) - 1] + a * plant.delay);
    while (b - a > 1e-9 * b) {
        const double m = 0.5 * (a + b);
        const double pm_rat = phase_near(raw_rational_phase(plant, m), pa_rat);
        const double pm = pm_rat - m * plant.delay;
        if (pm > -kPi) {
            a = m;
            pa_rat = pm_rat;
        } else {
            b = m;
        }
    }
    const double w180 = 0.5 * (a + b);
    UltimatePoint up;
    up.omega180 = w180;
    up.ku = 1.0 / gain_at(plant, w180);
    up.tu = 2.0 * kPi / w180;
    return up;
}

ReactionCurve reaction_curve(const TransferFunction& plant, const SimGrid& grid) {
    const TimeSeries y = step_response(plant, grid);
    if (y.diverged) throw NumericError("reaction_curve: open-loop step response diverged");
    const double dt = y.grid.dt();
    const int n = y.grid.n_samples;

    int imax = -1;
    double smax = -1.0;
    std::vector<double> slope(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        slope[static_cast<std::size_t>(i)] =
            (y.values[static_cast<std::size_t>(i) + 1] - y.values[static_cast<std::size_t>(i) - 1]) /
            (2.0 * dt);
        if (slope[static_cast<std::size_t>(i)] > smax) {
            smax = slope[static_cast<std::size_t>(i)];
            imax = i;
        }
    }
    if (imax <= 1)
        throw NumericError("reaction_curve: response is not S-shaped (slope maximal at t = 0)");
    if (imax >= n - 2)
        throw NumericError("reaction_curve: slope still rising at the end of the horizon");

    const double sm = slope[static_cast<std::size_t>(imax) - 1];
    const double s0 = slope[static_cast<std::size_t>(imax)];
    const double sp = slope[static_cast<std::size_t>(imax) + 1];
    const double denom = sm - 2.0 * s0 + sp;
    double off = 0.0;
    double rate = s0;
    if (denom < 0.0) {
        off = 0.5 * (sm - sp) / denom;
        rate = s0 - 0.25 * (sm - sp) * off;
    }
    const double t_inf = y.grid.time(imax) + off * dt;
    const double y_inf = y.interp(t_inf);

    ReactionCurve rc;
    rc.rate = rate;
    rc.t_inflection = t_inf;
    rc.lag = t_inf - y_inf / rate;
    if (rc.lag <= 0.0)
        throw NumericError("reaction_curve: tangent intercept is non-positive; not S-shaped");
    return rc;
}

PidGains zn_reaction_pid(const ReactionCurve& rc) {
    const double kp = 1.2 / (rc.rate * rc.lag);
    const double ti = 2.0 * rc.lag;
    const double td = 0.5 * rc.lag;
    return {kp, kp / ti, kp * td};
}

PidGains zn_ultimate(const UltimatePoint& up, ZnStructure structure) {
    switch (structure) {
        case ZnStructure::P:
            return {0.5 * up.ku, 0.0, 0.0};
        case ZnStructure::PI: {
            const double kp = 0.45 * up.ku;
            return {kp, kp / (up.tu / 1.2), 0.0};
        }
        case ZnStructure::PID: {
            const double kp = 0.6 * up.ku;
            return {kp, kp / (up.tu / 2.0), kp * up.tu / 8.0};
        }
    }
    throw ConfigError("zn_ultimate: unknown structure");
}

PidGains lambda_pi(double K, double T, double L, double Tcl) {
    if (K <= 0.0 || T <= 0.0 || Tcl <= 0.0)
        throw ConfigError("lambda_pi: K, T and Tcl must be > 0");
    if (L < 0.0) throw ConfigError("lambda_pi: L must be >= 0");
    if (!(T < Tcl && Tcl < 3.0 * T))
        std::fprintf(stderr, "warning: lambda_pi: Tcl = %g outside the recommended (T, 3T) range\n",
                     Tcl);
    const double kp = T / (K * (L + Tcl));
    return {kp, kp / T, 0.0};
}

PidGains pole_placement_pi_first_order(double T, double po_pct, double ts) {
    if (T <= 0.0) throw ConfigError("pole_placement: T must be > 0");
    const double zeta = damping_from_overshoot(po_pct);
    const double wn = natural_frequency(zeta, ts, po_pct == 0.0);
    const double kp = 2.0 * zeta * wn * T - 1.0;
    if (kp < 0.0)
        throw ConfigError("pole_placement: infeasible target (requested response slower than the plant)");
    return {kp, wn * wn * T, 0.0};
}

}  // namespace pidfit
