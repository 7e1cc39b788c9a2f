#pragma once

#include "pidfit/lti.hpp"

namespace pidfit {

/// Stability-boundary point: ultimate gain and period at the -180 degree
/// phase crossover.
struct UltimatePoint {
    double ku = 0.0;
    double tu = 0.0;
    double omega180 = 0.0;
};

/// Tangent construction on an S-shaped open-loop step response.
struct ReactionCurve {
    double lag = 0.0;           // tangent zero crossing
    double rate = 0.0;          // maximum slope
    double t_inflection = 0.0;  // where the slope peaks
};

enum class ZnStructure { P, PI, PID };

/// Locate the -180 degree crossover by bisection on the unwrapped phase.
/// Throws NumericError when the phase never reaches -180 degrees.
UltimatePoint ultimate_point(const TransferFunction& plant);

/// Identify lag and rate from a simulated open-loop step response.
/// Throws NumericError when the response is not S-shaped.
ReactionCurve reaction_curve(const TransferFunction& plant, const SimGrid& grid);

/// Classic ZN reaction-curve PID: Kp = 1.2/(R*lag), Ti = 2*lag, Td = lag/2.
PidGains zn_reaction_pid(const ReactionCurve& rc);

/// Classic ZN ultimate-cycle table.
PidGains zn_ultimate(const UltimatePoint& up, ZnStructure structure);

/// Lambda (pole-zero cancelling) PI for a FOTD plant K e^{-sL}/(1+sT).
PidGains lambda_pi(double K, double T, double L, double Tcl);

/// PI placing both closed-loop poles of a first-order unit-gain plant at
/// the (zeta, wn) implied by (PO, Ts): Kp = 2*zeta*wn*T - 1, Ki = wn^2*T.
PidGains pole_placement_pi_first_order(double T, double po_pct, double ts);

}  // namespace pidfit
