#include "pidfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "pidfit/errors.hpp"

namespace pidfit {

double settling_time_2pct(const TimeSeries& y, double final_value) {
    if (final_value == 0.0) throw ConfigError("settling_time: final value must be nonzero");
    if (y.diverged) throw NumericError("settling_time: response diverged");
    const double band = 0.02 * std::abs(final_value);
    int last_out = -1;
    for (int i = 0; i < y.grid.n_samples; ++i)
        if (std::abs(y.values[static_cast<std::size_t>(i)] - final_value) > band) last_out = i;
    if (last_out < 0) return 0.0;
    if (last_out == y.grid.n_samples - 1)
        throw NumericError("settling_time: response never settles within the horizon");
    return y.grid.time(last_out + 1);
}

double percent_overshoot(const TimeSeries& y, double final_value) {
    const double peak = *std::max_element(y.values.begin(), y.values.end());
    return std::max(0.0, (peak - final_value) / final_value * 100.0);
}

double compute_iae(const TimeSeries& y, double reference) {
    const double dt = y.grid.dt();
    double acc = 0.0;
    for (int i = 0; i + 1 < y.grid.n_samples; ++i) {
        const double a = std::abs(reference - y.values[static_cast<std::size_t>(i)]);
        const double b = std::abs(reference - y.values[static_cast<std::size_t>(i) + 1]);
        acc += 0.5 * dt * (a + b);
    }
    return acc;
}

namespace {

// Quadratic peak height through three equally spaced samples.
double parabolic_peak(double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return y0;  // not a local max shape
    const double d = 0.5 * (ym - yp) / denom;
    return y0 - 0.25 * (ym - yp) * d;
}

}  // namespace

std::optional<double> decay_ratio(const TimeSeries& y, double final_value) {
    std::vector<double> peaks;
    for (int i = 1; i + 1 < y.grid.n_samples; ++i) {
        const double ym = y.values[static_cast<std::size_t>(i) - 1];
        const double y0 = y.values[static_cast<std::size_t>(i)];
        const double yp = y.values[static_cast<std::size_t>(i) + 1];
        if (y0 > ym && y0 >= yp && y0 > final_value)
            peaks.push_back(parabolic_peak(ym, y0, yp) - final_value);
    }
    if (peaks.size() < 2) return std::nullopt;
    return peaks[1] / peaks[0];
}

namespace {

double sensitivity_mag(const TransferFunction& loop, double w) {
    const std::complex<double> jw(0.0, w);
    const std::complex<double> d = loop.den(jw);
    if (std::abs(d) == 0.0)
        throw NumericError("max_sensitivity: loop pole on the imaginary axis at omega = " +
                           std::to_string(w));
    std::complex<double> l = loop.num(jw) / d;
    l *= std::exp(std::complex<double>(0.0, -w * loop.delay));
    const std::complex<double> one_plus = 1.0 + l;
    if (std::abs(one_plus) == 0.0)
        throw NumericError("max_sensitivity: sensitivity singular at omega = " + std::to_string(w));
    return 1.0 / std::abs(one_plus);
}

}  // namespace

SensitivityPeak max_sensitivity(const TransferFunction& loop, double omega_lo,
                                double omega_hi, int n_points) {
    if (!loop.proper()) throw NumericError("max_sensitivity: loop must be proper");
    const std::vector<double> w = log_spaced(omega_lo, omega_hi, n_points);
    int best = 0;
    double best_s = -1.0;
    for (int i = 0; i < n_points; ++i) {
        const double s = sensitivity_mag(loop, w[static_cast<std::size_t>(i)]);
        if (s > best_s) {
            best_s = s;
            best = i;
        }
    }

    // golden-section refinement in log-omega around the grid maximum
    const double grid_best = best_s;
    const double grid_best_w = w[static_cast<std::size_t>(best)];
    double a = std::log(w[static_cast<std::size_t>(std::max(0, best - 1))]);
    double b = std::log(w[static_cast<std::size_t>(std::min(n_points - 1, best + 1))]);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = sensitivity_mag(loop, std::exp(x1));
    double f2 = sensitivity_mag(loop, std::exp(x2));
    while (b - a > 1e-6) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = sensitivity_mag(loop, std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = sensitivity_mag(loop, std::exp(x1));
        }
    }
    const double wr = std::exp(0.5 * (a + b));
    const double fr = sensitivity_mag(loop, wr);
    if (fr > grid_best) return {fr, wr};
    return {grid_best, grid_best_w};
}

bool is_stable_rational(const TransferFunction& closed_loop) {
    if (closed_loop.den.degree() < 1) return true;  // static system
    for (const auto& p : poly_roots(closed_loop.den))
        if (p.real() >= -1e-9) return false;
    return true;
}

bool is_stable_series(const TimeSeries& y, double predicted_final) {
    if (y.diverged) return false;
    const int start = y.grid.n_samples - std::max(1, y.grid.n_samples / 10);
    const double band = 0.02 * std::max(1.0, std::abs(predicted_final));
    for (int i = start; i < y.grid.n_samples; ++i) {
        const double v = y.values[static_cast<std::size_t>(i)];
        if (!std::isfinite(v) || std::abs(v - predicted_final) > band) return false;
    }
    return true;
}

}  // namespace pidfit
