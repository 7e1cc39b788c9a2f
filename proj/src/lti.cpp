#include "pidfit/lti.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "pidfit/errors.hpp"

namespace pidfit {

namespace {

constexpr double kDivergeClamp = 1e9;

// Controllable canonical realization of a proper rational num/den.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;
    int n = 0;

    explicit StateSpace(const TransferFunction& tf) {
        if (!tf.proper()) throw NumericError("state space: transfer function is improper");
        const auto& dc = tf.den.coeffs();
        n = tf.den.degree();
        const double lead = dc[0];
        // pad numerator to denominator length, normalize by leading den coeff
        std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
        const auto& nc = tf.num.coeffs();
        std::copy(nc.begin(), nc.end(), num.end() - static_cast<long>(nc.size()));
        for (double& v : num) v /= lead;
        std::vector<double> den(dc.begin(), dc.end());
        for (double& v : den) v /= lead;

        D = num[0];
        A = Eigen::MatrixXd::Zero(n, n);
        B = Eigen::VectorXd::Zero(n);
        C = Eigen::RowVectorXd::Zero(n);
        if (n > 0) {
            for (int i = 0; i < n; ++i) A(0, i) = -den[static_cast<std::size_t>(i) + 1];
            for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
            B(0) = 1.0;
            for (int i = 0; i < n; ++i)
                C(i) = num[static_cast<std::size_t>(i) + 1] - D * den[static_cast<std::size_t>(i) + 1];
        }
    }
};

// Exact ZOH discretization via the augmented matrix exponential.
struct Discrete {
    Eigen::MatrixXd Ad;
    Eigen::VectorXd Bd;

    Discrete(const StateSpace& ss, double dt) {
        const int n = ss.n;
        if (n == 0) {
            Ad.resize(0, 0);
            Bd.resize(0);
            return;
        }
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
        M.topLeftCorner(n, n) = ss.A * dt;
        M.topRightCorner(n, 1) = ss.B * dt;
        Eigen::MatrixXd E = M.exp();
        Ad = E.topLeftCorner(n, n);
        Bd = E.topRightCorner(n, 1);
    }
};

int delay_samples(double delay, double dt) {
    if (delay <= 0.0) return 0;
    const double k = delay / dt;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * std::max(1.0, k))
        throw NumericError("simulation grid dt does not divide the dead time");
    return static_cast<int>(kr);
}

}  // namespace

TransferFunction::TransferFunction(Polynomial n, Polynomial d, double delay_s)
    : num(std::move(n)), den(std::move(d)), delay(delay_s) {
    if (den.is_zero()) throw ConfigError("transfer function: denominator is zero");
    if (delay < 0.0) throw ConfigError("transfer function: delay must be >= 0");
}

SimGrid::SimGrid(double t_final_s, int n) : t_final(t_final_s), n_samples(n) {
    if (t_final <= 0.0) throw ConfigError("grid: t_final must be > 0");
    if (n_samples < 2) throw ConfigError("grid: n_samples must be >= 2");
}

SimGrid SimGrid::refined_for_delay(double delay) const {
    if (delay <= 0.0) return *this;
    int n = n_samples;
    for (;;) {
        const double k = delay * (n - 1) / t_final;
        if (std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k)) return SimGrid(t_final, n);
        ++n;
    }
}

double TimeSeries::interp(double t) const {
    const double dt = grid.dt();
    if (t <= 0.0) return values.front();
    if (t >= grid.t_final) return values.back();
    const double u = t / dt;
    const int i = std::min(static_cast<int>(u), grid.n_samples - 2);
    const double f = u - i;
    return values[static_cast<std::size_t>(i)] * (1.0 - f) +
           values[static_cast<std::size_t>(i) + 1] * f;
}

TransferFunction pid_tf(const PidGains& g) {
    if (g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0)
        throw ConfigError("pid_tf: gains must be non-negative");
    if (g.ki == 0.0 && g.kd == 0.0) return {Polynomial{g.kp}, Polynomial{1.0}};
    return {Polynomial{g.kd, g.kp, g.ki}, Polynomial{1.0, 0.0}};
}

TransferFunction tf_feedback_unity(const TransferFunction& loop) {
    if (loop.delay != 0.0)
        throw NumericError("tf_feedback_unity: delayed loops cannot be closed symbolically");
    Polynomial den = poly_add(loop.den, loop.num);
    TransferFunction t(loop.num, std::move(den));
    if (!t.proper())
        throw NumericError("tf_feedback_unity: closed loop is improper; controller/plant pairing unrealizable");
    return t;
}

TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b) {
    return {poly_mul(a.num, b.num), poly_mul(a.den, b.den), a.delay + b.delay};
}

DcGain dc_gain(const TransferFunction& sys) {
    const double n0 = sys.num(0.0);
    const double d0 = sys.den(0.0);
    if (d0 == 0.0) {
        if (n0 == 0.0) throw NumericError("dc_gain: 0/0 indeterminate at s=0");
        return {.infinite = true, .value = 0.0};
    }
    return {.infinite = false, .value = n0 / d0};
}

TimeSeries step_response(const TransferFunction& sys, const SimGrid& grid) {
    if (!sys.proper()) throw NumericError("step_response: system is improper");
    const SimGrid g = grid.refined_for_delay(sys.delay);
    const double dt = g.dt();
    const int shift = delay_samples(sys.delay, dt);

    StateSpace ss(sys);
    Discrete dz(ss, dt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.n);

    TimeSeries out;
    out.grid = g;
    out.values.assign(static_cast<std::size_t>(g.n_samples), 0.0);
    for (int k = 0; k < g.n_samples; ++k) {
        const double u = (k >= shift) ? 1.0 : 0.0;
        double y = ss.D * u;
        if (ss.n > 0) y += ss.C.dot(x);
        if (!std::isfinite(y) || std::abs(y) > kDivergeClamp) {
            out.diverged = true;
            out.divergence_magnitude =
                std::isfinite(y) ? std::abs(y) : kDivergeClamp;
            y = std::copysign(kDivergeClamp, std::isfinite(y) ? y : 1.0);
            std::fill(out.values.begin() + k, out.values.end(), y);
            return out;
        }
        out.values[static_cast<std::size_t>(k)] = y;
        if (ss.n > 0) x = dz.Ad * x + dz.Bd * u;
    }
    return out;
}

TimeSeries simulate_closed_loop(const TransferFunction& plant, const PidGains& gains,
                                const SimGrid& grid, bool force_discrete) {
    if (!plant.proper()) throw NumericError("simulate_closed_loop: plant is improper");
    if (plant.delay == 0.0 && !force_discrete) {
        const TransferFunction loop = tf_mul(pid_tf(gains), plant);
        return step_response(tf_feedback_unity(loop), grid);
    }

    const SimGrid g = grid.refined_for_delay(plant.delay);
    const double dt = g.dt();
    const int nbuf = delay_samples(plant.delay, dt);

    TransferFunction rational(plant.num, plant.den);
    StateSpace ss(rational);
    Discrete dz(ss, dt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.n);
    std::vector<double> buf(static_cast<std::size_t>(nbuf), 0.0);
    std::size_t head = 0;

    TimeSeries out;
    out.grid = g;
    out.values.assign(static_cast<std::size_t>(g.n_samples), 0.0);

    double integral = 0.0;
    double e_prev = 0.0;
    double y_prev = 0.0;
    for (int k = 0; k < g.n_samples; ++k) {
        const double e = 1.0 - y_prev;
        integral += 0.5 * dt * (e + e_prev);
        const double deriv = (e - e_prev) / dt;
        const double u = gains.kp * e + gains.ki * integral + gains.kd * deriv;

        double u_in = u;
        if (nbuf > 0) {
            u_in = buf[head];
            buf[head] = u;
            head = (head + 1) % buf.size();
        }

        double y = (ss.n > 0 ? ss.C.dot(x) : 0.0) + ss.D * u_in;
        if (!std::isfinite(y) || std::abs(y) > kDivergeClamp) {
            out.diverged = true;
            out.divergence_magnitude = std::isfinite(y) ? std::abs(y) : kDivergeClamp;
            y = std::copysign(kDivergeClamp, std::isfinite(y) ? y : 1.0);
            std::fill(out.values.begin() + k, out.values.end(), y);
            return out;
        }
        out.values[static_cast<std::size_t>(k)] = y;
        if (ss.n > 0) x = dz.Ad * x + dz.Bd * u_in;
        e_prev = e;
        y_prev = y;
    }
    return out;
}

FrequencyResponse freq_response(const TransferFunction& sys,
                                const std::vector<double>& omegas) {
    FrequencyResponse out;
    out.omegas = omegas;
    out.magnitudes.reserve(omegas.size());
    out.phases_rad.reserve(omegas.size());
    for (double w : omegas) {
        if (w <= 0.0) throw ConfigError("freq_response: frequencies must be > 0");
        const std::complex<double> jw(0.0, w);
        const std::complex<double> d = sys.den(jw);
        if (std::abs(d) == 0.0)
            throw NumericError("freq_response: pole on the imaginary axis at omega = " +
                               std::to_string(w));
        std::complex<double> h = sys.num(jw) / d;
        h *= std::exp(std::complex<double>(0.0, -w * sys.delay));
        out.magnitudes.push_back(std::abs(h));
        out.phases_rad.push_back(std::arg(h));
    }
    return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return w;
}

}  // namespace pidfit
