#pragma once

#include <vector>

#include "greenmass/greensolve.hpp"

namespace greenmass {

// Pointwise data of the blow-up metric g = G^2 gbar at one radius. All entries
// are in g-units; lam_* are Hessian components against the gbar-orthonormal
// frame (the g-frame values carry an extra G^-2).
struct FieldPoint {
    double r = 0;
    double G = 0, dG = 0, ddG = 0;
    double gradG2 = 0;   // |grad_g G|^2 = (G')^2 / G^2
    double F = 0;        // (1 + |grad G|^2)/G - 4
    double dF = 0;       // F'(r), analytic from G, G', G''
    double lam_r = 0;    // G'' - (G')^2/G
    double lam_a = 0;    // (a'/a) G' + (G')^2/G   (multiplicity 2)
    double lam_b = 0;    // (b'/b) G' + (G')^2/G
    double lapG = 0;     // Lap_g G = G^-2 (lam_r + 2 lam_a + lam_b)
    double tfHess2 = 0;  // |tracefree Hess_g G|^2 = G^-4 [sum lam^2 - (sum lam)^2/4]
    double P_rr = 0;     // Schouten of g on the gbar-unit radial vector
    double weight = 0;   // 2 pi^2 G^4 J, the g-volume density against dr
};

struct BlowupFields {
    // grid arrays (one row per GreenSolution grid node)
    std::vector<double> r, G, dG, gradG2, F, dF, lam_r, lam_a, lam_b, lapG, tfHess2, P_rr, weight;
    const WarpedProfile* profile = nullptr;
    const GreenSolution* sol = nullptr;
};

FieldPoint eval_field_point(const WarpedProfile& p, const GreenSolution& s, double r);
BlowupFields compute_fields(const WarpedProfile& p, const GreenSolution& s);

// max_i |Lap_g G - 2 G^-1 (1 + |grad G|^2)| / max_i |Lap_g G| with the Laplacian
// reconstructed from an independent finite-difference second derivative.
// Requires an Einstein-certified profile.
double residual_DG(const BlowupFields& f);
// same residual without the Einstein gate, for falsification runs
double residual_DG_general(const BlowupFields& f);

// max_i |F' - 2 (lam_r - S/4) G' / G^3| scaled; radial component of
// grad F = -2 P(grad G, .). Einstein-certified only.
double residual_dF_schouten(const BlowupFields& f);

// max scaled residual of Lap_g F = 2 G^-1 |tracefree Hess G|^2 with
// Lap_g F = (G^4 J)^-1 (G^2 J F')'; interior only, two cells dropped at each
// end. Einstein-certified only.
double residual_laplace_F(const BlowupFields& f);

// mhat = -lim F(r)/r^2 by Richardson extrapolation over {r0, 2 r0, 4 r0};
// throws when the two extrapolation levels disagree beyond tol.
double f_asymptote_mass(const BlowupFields& f, double tol = 1e-4);

double max_F(const BlowupFields& f);
// max_i (gradG2 - 4 G + 1) / max(1, 4 G)  (sharp gradient bound, <= 0 up to tol)
double gradient_estimate_violation(const BlowupFields& f);
// largest pointwise deviation |gradG2 - 4G + 1| / max(1, 4G); zero iff the
// profile is round
double gradient_estimate_deviation(const BlowupFields& f);

}  // namespace greenmass
