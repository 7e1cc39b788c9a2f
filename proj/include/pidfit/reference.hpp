#pragma once

#include <optional>

#include "pidfit/lti.hpp"

namespace pidfit {

enum class TargetKind { second_order, fotd, custom_tf, trajectory };

/// Desired closed-loop response definition. Only the fields of the active
/// kind are meaningful; validate() enforces that.
struct DesiredSpec {
    TargetKind kind = TargetKind::second_order;

    // second_order via (PO, Ts), or directly via (zeta, wn)
    double po_pct = 0.0;
    double ts = 0.0;
    std::optional<double> zeta;   // direct (zeta, wn) entry point
    std::optional<double> wn;

    // fotd
    double tcl = 0.0;
    double fotd_delay = 0.0;

    // custom_tf
    std::optional<TransferFunction> tf;

    // trajectory
    std::optional<TimeSeries> series;

    void validate() const;

    /// Predicted 2% settling time of the target (second-order: Ts;
    /// FOTD: L + 4*Tcl; custom_tf: ln(50)/min(-Re pole) + delay;
    /// trajectory: its own horizon). Drives the default grid.
    double predicted_settling() const;
};

DesiredSpec second_order_spec(double po_pct, double ts);
DesiredSpec second_order_spec_zw(double zeta, double wn);
DesiredSpec fotd_spec(double tcl, double delay);
DesiredSpec custom_tf_spec(TransferFunction tf);
DesiredSpec trajectory_spec(TimeSeries series);

/// Eq-style damping from percent overshoot; PO = 0 routes exactly to the
/// critically damped branch (zeta = 1).
double damping_from_overshoot(double po_pct);

/// 2% settling-time natural frequency: 4/(zeta*Ts) underdamped,
/// 6/Ts critically damped.
double natural_frequency(double zeta, double ts, bool critically_damped);

TransferFunction make_second_order(double po_pct, double ts);
TransferFunction make_second_order_zw(double zeta, double wn);
TransferFunction make_fotd(double tcl, double delay);

/// Materialize the target system or generate the desired system and
/// simulate/resample it on the grid.
TimeSeries desired_response(const DesiredSpec& spec, const SimGrid& grid);

}  // namespace pidfit
