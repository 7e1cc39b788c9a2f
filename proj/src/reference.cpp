#include "pidfit/reference.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "pidfit/errors.hpp"
#include "pidfit/polynomial.hpp"

namespace pidfit {

namespace {
constexpr double kPi = std::numbers::pi;
}

void DesiredSpec::validate() const {
    switch (kind) {
        case TargetKind::second_order:
            if (zeta || wn) {
                if (!(zeta && wn)) throw ConfigError("target: zeta and wn must be given together");
                if (*zeta <= 0.0 || *wn <= 0.0)
                    throw ConfigError("target: zeta and wn must be > 0");
            } else {
                if (po_pct < 0.0 || po_pct >= 100.0)
                    throw ConfigError("target.PO: must be in [0, 100)");
                if (ts <= 0.0) throw ConfigError("target.Ts: must be > 0");
            }
            break;
        case TargetKind::fotd:
            if (tcl <= 0.0) throw ConfigError("target.Tcl: must be > 0");
            if (fotd_delay < 0.0) throw ConfigError("target.L: must be >= 0");
            break;
        case TargetKind::custom_tf:
            if (!tf) throw ConfigError("target.tf: missing transfer function");
            if (!tf->proper()) throw ConfigError("target.tf: must be proper");
            break;
        case TargetKind::trajectory:
            if (!series || series->values.empty())
                throw ConfigError("target.series: missing trajectory");
            break;
    }
}

double DesiredSpec::predicted_settling() const {
    switch (kind) {
        case TargetKind::second_order:
            if (zeta && wn) {
                // translate back to the 2% settling approximations
                return (*zeta >= 1.0 ? 6.0 : 4.0) / (*zeta * *wn);
            }
            return ts;
        case TargetKind::fotd:
            return fotd_delay + 4.0 * tcl;
        case TargetKind::custom_tf: {
            double slowest = 0.0;
            for (const auto& r : poly_roots(tf->den)) slowest = std::min(slowest, r.real());
            if (slowest >= 0.0) throw ConfigError("target.tf: target system must be stable");
            return std::log(50.0) / (-slowest) + tf->delay;
        }
        case TargetKind::trajectory:
            return series->grid.t_final;
    }
    throw ConfigError("target: unknown kind");
}

DesiredSpec second_order_spec(double po_pct, double ts) {
    DesiredSpec s;
    s.kind = TargetKind::second_order;
    s.po_pct = po_pct;
    s.ts = ts;
    s.validate();
    return s;
}

DesiredSpec second_order_spec_zw(double zeta, double wn) {
    DesiredSpec s;
    s.kind = TargetKind::second_order;
    s.zeta = zeta;
    s.wn = wn;
    s.validate();
    return s;
}

DesiredSpec fotd_spec(double tcl, double delay) {
    DesiredSpec s;
    s.kind = TargetKind::fotd;
    s.tcl = tcl;
    s.fotd_delay = delay;
    s.validate();
    return s;
}

DesiredSpec custom_tf_spec(TransferFunction tf) {
    DesiredSpec s;
    s.kind = TargetKind::custom_tf;
    s.tf = std::move(tf);
    s.validate();
    return s;
}

DesiredSpec trajectory_spec(TimeSeries series) {
    DesiredSpec s;
    s.kind = TargetKind::trajectory;
    s.series = std::move(series);
    s.validate();
    return s;
}

double damping_from_overshoot(double po_pct) {
    if (po_pct < 0.0 || po_pct >= 100.0)
        throw ConfigError("damping_from_overshoot: PO must be in [0, 100)");
    if (po_pct == 0.0) return 1.0;
    const double l = std::log(po_pct / 100.0);
    return -l / std::sqrt(kPi * kPi + l * l);
}

double natural_frequency(double zeta, double ts, bool critically_damped) {
    if (ts <= 0.0) throw ConfigError("natural_frequency: Ts must be > 0");
    if (zeta <= 0.0 || zeta > 1.0)
        throw ConfigError("natural_frequency: zeta must be in (0, 1]");
    return (critically_damped ? 6.0 : 4.0) / (zeta * ts);
}

TransferFunction make_second_order_zw(double zeta, double wn) {
    if (zeta <= 0.0 || wn <= 0.0)
        throw ConfigError("make_second_order: zeta and wn must be > 0");
    return {Polynomial{wn * wn}, Polynomial{1.0, 2.0 * zeta * wn, wn * wn}};
}

TransferFunction make_second_order(double po_pct, double ts) {
    if (po_pct > 0.0 && po_pct < 0.01)
        std::fprintf(stderr,
                     "warning: PO = %g%% is nearly critical; the underdamped "
                     "4/(zeta*Ts) settling rule diverges from the critical branch\n",
                     po_pct);
    const double zeta = damping_from_overshoot(po_pct);
    const double wn = natural_frequency(zeta, ts, po_pct == 0.0);
    return make_second_order_zw(zeta, wn);
}

TransferFunction make_fotd(double tcl, double delay) {
    if (tcl <= 0.0) throw ConfigError("make_fotd: Tcl must be > 0");
    if (delay < 0.0) throw ConfigError("make_fotd: delay must be >= 0");
    return {Polynomial{1.0}, Polynomial{tcl, 1.0}, delay};
}

TimeSeries desired_response(const DesiredSpec& spec, const SimGrid& grid) {
    spec.validate();
    switch (spec.kind) {
        case TargetKind::second_order: {
            TransferFunction tf = (spec.zeta && spec.wn)
                                      ? make_second_order_zw(*spec.zeta, *spec.wn)
                                      : make_second_order(spec.po_pct, spec.ts);
            return step_response(tf, grid);
        }
        case TargetKind::fotd:
            return step_response(make_fotd(spec.tcl, spec.fotd_delay), grid);
        case TargetKind::custom_tf:
            return step_response(*spec.tf, grid);
        case TargetKind::trajectory: {
            const TimeSeries& src = *spec.series;
            if (src.grid.t_final < grid.t_final - 1e-12)
                throw ConfigError("target.series: trajectory shorter than the tuning horizon");
            if (src.grid == grid) return src;
            TimeSeries out;
            out.grid = grid;
            out.values.resize(static_cast<std::size_t>(grid.n_samples));
            for (int i = 0; i < grid.n_samples; ++i)
                out.values[static_cast<std::size_t>(i)] = src.interp(grid.time(i));
            return out;
        }
    }
    throw ConfigError("target: unknown kind");
}

}  // namespace pidfit
