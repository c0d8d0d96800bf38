#pragma once

#include "greenmass/blowup.hpp"
#include "greenmass/integrate.hpp"

namespace greenmass {

// Named integrals of the blow-up analysis. Every g-integral is reduced against
// dr with the single weight 2 pi^2 G^4 J; each implementation comments its
// G-power bookkeeping. All are computed with two-order endpoint series
// subtraction plus composite refinement on the interior.

// Int G^-2 |gradbar G|^2 dvbar = 2 pi^2 Int (G'/G)^2 J dr; equals 2 Vbar on
// Einstein-certified profiles. Requires |kappa| ~ 0.
IntegralResult integral_IG1(const GreenSolution& s);

// Int G dvbar = 2 pi^2 Int G J dr = 2 pi^2. Requires Einstein certification
// (uses Lapbar G = 2 G) and |kappa| ~ 0.
IntegralResult integral_IG2(const GreenSolution& s);

// -Int F G dvbar = 3 (8 pi^2/3 - Vbar). Einstein-certified, |kappa| ~ 0.
IntegralResult integral_FG(const GreenSolution& s, const BlowupFields& f);

// 2 Int |tracefree Hess G|^2 |grad G|^2 / G^2 dv_g
//   = 4 pi^2 Int tfHess2 * gradG2 * G^2 * J dr. Einstein-certified.
IntegralResult integral_hess(const BlowupFields& f);

// Int |grad_g F|^2 dv_g = 2 pi^2 Int (F')^2 G^2 J dr. Einstein-certified.
IntegralResult integral_gradF(const BlowupFields& f);

// Int <grad F, grad G> G^-2 dv_g = 2 pi^2 Int F' G' J dr; limit value
// 6 (8 pi^2/3 - Vbar). Einstein-certified.
IntegralResult integral_Irho_limit(const BlowupFields& f, const GreenSolution& s);

// Generalization of IG2 valid without the Einstein hypothesis:
// Int (R/6) G dvbar = 4 pi^2 by the pole flux of L G = 0.
IntegralResult integral_LG_flux(const GreenSolution& s);

// |16 pi^2 m - 6 (8 pi^2/3 - Vbar) - I_hess - I_F|
double mv1_residual(double mass, double Vbar, double I_hess, double I_F);

}  // namespace greenmass
