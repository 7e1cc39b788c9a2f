#pragma once

#include <cstdint>

#include "pidfit/lti.hpp"
#include "pidfit/metrics.hpp"
#include "pidfit/reference.hpp"

namespace pidfit {

/// One tuning task: fit the closed-loop step response of plant+PID to the
/// desired response over the grid, within non-negative box bounds.
/// Setting a component of bounds_hi to 0 forces P/PI/PD structures.
struct TuneProblem {
    TransferFunction plant;
    DesiredSpec spec;
    PidGains bounds_lo{0.0, 0.0, 0.0};
    PidGains bounds_hi{kUnbounded, kUnbounded, kUnbounded};
    SimGrid grid;
    int max_evals = 3000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    int n_starts = 1;

    // +inf upper bounds are capped here so projections stay well-defined
    static constexpr double kUnbounded = 1e6;

    void validate() const;
};

struct TuneResult {
    PidGains gains;
    double objective = 0.0;
    int evals_used = 0;
    bool converged = false;
    MetricsReport metrics;
    TimeSeries response;
    TimeSeries desired;
};

/// Discrete 2-norm of the sample errors between the desired response and
/// the closed loop at these gains. Diverged simulations return the finite
/// penalty 1e6 + log1p(divergence magnitude).
double l2_objective(const TuneProblem& problem, const PidGains& gains);

/// Deterministic bound-constrained minimization from (0,0,0): projected
/// adaptive Nelder-Mead with restart rounds, at most max_evals objective
/// evaluations in total per start. n_starts > 1 adds seeded random starts.
TuneResult tune(const TuneProblem& problem);

/// Metrics for fixed gains, no optimization.
TuneResult evaluate(const TuneProblem& problem, const PidGains& gains);

/// Recompute the stability verdict and metrics (including the open-loop
/// sensitivity peak) for an existing result.
MetricsReport check_stability_and_report(const TuneProblem& problem, const TuneResult& result);

}  // namespace pidfit
