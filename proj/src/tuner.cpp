#include "pidfit/tuner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "pidfit/errors.hpp"

namespace pidfit {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 clamp_to(const Vec3& x, const Vec3& lo, const Vec3& hi) {
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] =
        std::clamp(x[static_cast<std::size_t>(i)], lo[static_cast<std::size_t>(i)],
                   hi[static_cast<std::size_t>(i)]);
    return out;
}

struct NmOutcome {
    Vec3 x;
    double fx = 0.0;
    bool converged = false;
};

// Projected Nelder-Mead over the free coordinates, adaptive coefficients.
// `fixed[i]` pins coordinate i at lo[i]. Evaluations are charged against
// *evals and the search stops when the budget runs out.
NmOutcome nelder_mead(const std::function<double(const Vec3&)>& f, Vec3 x0, const Vec3& lo,
                      const Vec3& hi, const std::array<bool, 3>& fixed, double step, double tol,
                      int max_evals, int* evals) {
    std::vector<int> free_idx;
    for (int i = 0; i < 3; ++i)
        if (!fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    const int n = static_cast<int>(free_idx.size());

    auto eval = [&](Vec3 p) {
        p = clamp_to(p, lo, hi);
        ++*evals;
        return f(p);
    };

    if (n == 0) return {clamp_to(x0, lo, hi), eval(x0), true};

    // adaptive parameters (Gao & Han)
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / n;
    const double gamma = 0.75 - 0.5 / n;
    const double delta = 1.0 - 1.0 / n;

    struct Vertex {
        Vec3 x;
        double fx;
    };
    std::vector<Vertex> simplex;
    x0 = clamp_to(x0, lo, hi);
    simplex.push_back({x0, eval(x0)});
    for (int k = 0; k < n; ++k) {
        Vec3 p = x0;
        p[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(k)])] += step;
        p = clamp_to(p, lo, hi);
        simplex.push_back({p, eval(p)});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    };
    order();

    bool converged = false;
    while (*evals < max_evals) {
        // convergence: simplex collapsed in both value and extent
        double fspread = std::abs(simplex.back().fx - simplex.front().fx);
        double xspread = 0.0;
        for (const auto& v : simplex)
            for (int i : free_idx)
                xspread = std::max(xspread, std::abs(v.x[static_cast<std::size_t>(i)] -
                                                     simplex.front().x[static_cast<std::size_t>(i)]));
        if (fspread <= tol * (1.0 + std::abs(simplex.front().fx)) && xspread <= tol) {
            converged = true;
            break;
        }

        Vec3 centroid = simplex.front().x;  // fixed coords come along for free
        for (int i : free_idx) {
            double s = 0.0;
            for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
                s += simplex[v].x[static_cast<std::size_t>(i)];
            centroid[static_cast<std::size_t>(i)] = s / n;
        }
        const Vertex& worst = simplex.back();

        auto along = [&](double coef) {
            Vec3 p = centroid;
            for (int i : free_idx)
                p[static_cast<std::size_t>(i)] +=
                    coef * (centroid[static_cast<std::size_t>(i)] -
                            worst.x[static_cast<std::size_t>(i)]);
            return clamp_to(p, lo, hi);
        };

        Vec3 xr = along(alpha);
        double fr = eval(xr);
        if (fr < simplex.front().fx) {
            Vec3 xe = along(alpha * beta);
            double fe = eval(xe);
            simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[simplex.size() - 2].fx) {
            simplex.back() = {xr, fr};
        } else {
            bool outside = fr < worst.fx;
            Vec3 xc = along(outside ? alpha * gamma : -gamma);
            double fc = eval(xc);
            if (fc < std::min(fr, worst.fx)) {
                simplex.back() = {xc, fc};
            } else {
                // shrink toward the best vertex
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (int i : free_idx)
                        simplex[v].x[static_cast<std::size_t>(i)] =
                            simplex.front().x[static_cast<std::size_t>(i)] +
                            delta * (simplex[v].x[static_cast<std::size_t>(i)] -
                                     simplex.front().x[static_cast<std::size_t>(i)]);
                    simplex[v].x = clamp_to(simplex[v].x, lo, hi);
                    simplex[v].fx = eval(simplex[v].x);
                    if (*evals >= max_evals) break;
                }
            }
        }
        order();
    }
    order();
    return {simplex.front().x, simplex.front().fx, converged};
}

struct SearchOutcome {
    Vec3 x;
    double fx;
    int evals = 0;
    bool converged = false;
};

// Restarted search: a coarse round from the start point, then refinement
// rounds around the incumbent until no improvement or budget exhausted.
SearchOutcome restarted_search(const std::function<double(const Vec3&)>& f, Vec3 x0,
                               const Vec3& lo, const Vec3& hi, const std::array<bool, 3>& fixed,
                               double tol, int max_evals) {
    SearchOutcome out{clamp_to(x0, lo, hi), 0.0, 0, false};
    double best = std::numeric_limits<double>::infinity();
    Vec3 x = x0;
    for (int round = 0; round < 8 && out.evals < max_evals; ++round) {
        const double step = round == 0 ? 1.0 : 0.1;
        NmOutcome r = nelder_mead(f, x, lo, hi, fixed, step, tol, max_evals, &out.evals);
        if (r.fx >= best - 1e-12) {
            out.converged = r.converged;
            break;
        }
        best = r.fx;
        out.x = r.x;
        out.fx = r.fx;
        out.converged = r.converged;
        x = r.x;
    }
    return out;
}

}  // namespace

void TuneProblem::validate() const {
    spec.validate();
    if (!plant.proper()) throw ConfigError("problem: plant must be proper");
    const double* lo = &bounds_lo.kp;
    const double* hi = &bounds_hi.kp;
    for (int i = 0; i < 3; ++i) {
        if (lo[i] < 0.0) throw ConfigError("problem: lower bounds must be >= 0");
        if (lo[i] > hi[i]) throw ConfigError("problem: bounds_lo must be <= bounds_hi");
    }
    if (max_evals < 1) throw ConfigError("problem: max_evals must be >= 1");
    if (tol <= 0.0) throw ConfigError("problem: tol must be > 0");
    if (n_starts < 1) throw ConfigError("problem: n_starts must be >= 1");
    if (spec.kind == TargetKind::fotd && std::abs(spec.fotd_delay - plant.delay) > 1e-12)
        throw ConfigError("target.L: FOTD target delay must equal the plant delay");
    if (grid.t_final < spec.predicted_settling())
        throw ConfigError("problem: grid horizon does not cover the target's settling time");
}

namespace {

double objective_on(const TimeSeries& desired, const TransferFunction& plant,
                    const PidGains& gains, const SimGrid& grid) {
    TimeSeries y;
    try {
        y = simulate_closed_loop(plant, gains, grid);
    } catch (const NumericError&) {
        return 1e6;  // unrealizable pairing treated as a hard penalty
    }
    if (y.diverged) return 1e6 + std::log1p(y.divergence_magnitude);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.values.size(); ++i) {
        const double e = desired.values[i] - y.values[i];
        acc += e * e;
    }
    return std::sqrt(acc);
}

MetricsReport build_report(const TuneProblem& problem, const PidGains& gains,
                           const TimeSeries& response) {
    MetricsReport rep;
    const TransferFunction open_loop = tf_mul(pid_tf(gains), problem.plant);

    if (problem.plant.delay == 0.0) {
        const TransferFunction closed = tf_feedback_unity(open_loop);
        rep.stable = is_stable_rational(closed);
        rep.final_value = dc_gain(closed).value;
    } else {
        // predicted final value from the rational part's DC gain
        const TransferFunction rational(open_loop.num, open_loop.den);
        const DcGain l0 = dc_gain(rational);
        rep.final_value = l0.infinite ? 1.0 : l0.value / (1.0 + l0.value);
        rep.stable = is_stable_series(response, rep.final_value);
    }

    if (rep.final_value != 0.0) {
        rep.overshoot_pct = percent_overshoot(response, rep.final_value);
        rep.decay_ratio = decay_ratio(response, rep.final_value);
        if (rep.stable) {
            try {
                rep.settling_time = settling_time_2pct(response, rep.final_value);
            } catch (const NumericError&) {
                rep.settling_time.reset();
            }
        }
    }
    rep.iae = compute_iae(response, 1.0);
    const SensitivityPeak peak = max_sensitivity(open_loop);
    rep.ms = peak.ms;
    rep.ms_at_omega = peak.at_omega;
    return rep;
}

}  // namespace

double l2_objective(const TuneProblem& problem, const PidGains& gains) {
    const SimGrid grid = problem.grid.refined_for_delay(problem.plant.delay);
    const TimeSeries desired = desired_response(problem.spec, grid);
    return objective_on(desired, problem.plant, gains, grid);
}

TuneResult tune(const TuneProblem& problem) {
    problem.validate();
    const SimGrid grid = problem.grid.refined_for_delay(problem.plant.delay);
    const TimeSeries desired = desired_response(problem.spec, grid);

    const Vec3 lo{problem.bounds_lo.kp, problem.bounds_lo.ki, problem.bounds_lo.kd};
    const Vec3 hi{std::min(problem.bounds_hi.kp, TuneProblem::kUnbounded),
                  std::min(problem.bounds_hi.ki, TuneProblem::kUnbounded),
                  std::min(problem.bounds_hi.kd, TuneProblem::kUnbounded)};
    std::array<bool, 3> fixed{};
    for (int i = 0; i < 3; ++i)
        fixed[static_cast<std::size_t>(i)] =
            lo[static_cast<std::size_t>(i)] >= hi[static_cast<std::size_t>(i)];

    auto f = [&](const Vec3& x) {
        return objective_on(desired, problem.plant, {x[0], x[1], x[2]}, grid);
    };

    SearchOutcome best =
        restarted_search(f, Vec3{0.0, 0.0, 0.0}, lo, hi, fixed, problem.tol, problem.max_evals);
    int total_evals = best.evals;

    if (problem.n_starts > 1) {
        std::mt19937_64 rng(problem.seed);
        for (int s = 1; s < problem.n_starts; ++s) {
            Vec3 x0;
            for (int i = 0; i < 3; ++i) {
                std::uniform_real_distribution<double> dist(
                    lo[static_cast<std::size_t>(i)],
                    std::min(hi[static_cast<std::size_t>(i)], 10.0));
                x0[static_cast<std::size_t>(i)] = dist(rng);
            }
            SearchOutcome r =
                restarted_search(f, x0, lo, hi, fixed, problem.tol, problem.max_evals);
            total_evals += r.evals;
            if (r.fx < best.fx) best = r;
        }
    }

    TuneResult result;
    result.gains = {best.x[0], best.x[1], best.x[2]};
    result.evals_used = total_evals;
    result.converged = best.converged;
    result.desired = desired;
    result.response = simulate_closed_loop(problem.plant, result.gains, grid);
    result.objective = objective_on(desired, problem.plant, result.gains, grid);
    result.metrics = build_report(problem, result.gains, result.response);
    return result;
}

TuneResult evaluate(const TuneProblem& problem, const PidGains& gains) {
    problem.spec.validate();
    if (gains.kp < 0.0 || gains.ki < 0.0 || gains.kd < 0.0)
        throw ConfigError("evaluate: gains must be non-negative");
    const SimGrid grid = problem.grid.refined_for_delay(problem.plant.delay);
    const TimeSeries desired = desired_response(problem.spec, grid);

    TuneResult result;
    result.gains = gains;
    result.evals_used = 1;
    result.converged = true;
    result.desired = desired;
    result.response = simulate_closed_loop(problem.plant, gains, grid);
    result.objective = objective_on(desired, problem.plant, gains, grid);
    result.metrics = build_report(problem, gains, result.response);
    return result;
}

MetricsReport check_stability_and_report(const TuneProblem& problem, const TuneResult& result) {
    return build_report(problem, result.gains, result.response);
}

}  // namespace pidfit
