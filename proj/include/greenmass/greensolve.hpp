#pragma once

#include <optional>
#include <vector>

#include "greenmass/frobenius.hpp"
#include "greenmass/ode.hpp"
#include "greenmass/profiles.hpp"

namespace greenmass {

struct SolveOptions {
    int n = 4096;                        // interior report-grid nodes
    std::size_t order = 12;              // series truncation at both endpoints
    double r0_factor = 1e-3;             // pole series handoff at r0 = r0_factor * L
    double u0_factor = 1e-3;             // far series handoff at u0 = u0_factor * L
    double match_point_factor = 1.0 / 3; // r_mid = factor * L, keep within [1/4, 1/2]
    double integrator_tolerance = 1e-12; // local error target; ignored in fixed-step mode
    bool fixed_step = false;             // one RK step per grid interval (pole-guarded)
    double kappa_tol = 1e-9;
    double cond_threshold = 1e8;
    bool allow_log_branch = true;
    bool estimate_convergence = true;    // re-solve at n/2 for an A error estimate
};

// Global Green's function of L = Lap - R/6 with G ~ 1/r^2: the far-regular
// solution is matched against the pole basis at r_mid and rescaled so that
// G = u1 + A u2 exactly.
struct GreenSolution {
    WarpedProfile profile;
    SolveOptions options;
    PoleExpansion pole;
    FarExpansion far;

    double r0 = 0, u0 = 0, r_mid = 0;
    double A = 0.0;
    double kappa = 0.0;
    double c1 = 0.0;  // far-branch rescale; G(L) = 1/c1
    std::optional<double> mass_series;  // 12A - 1, absent when the log branch is live
    double match_condition = 0.0;
    double wronskian_drift = 0.0;       // max |(u1 u2' - u2 u1') J / 2 - 1|
    double defect_max = 0.0;            // independent finite-difference ODE residual
    double defect_near_pole = 0.0;      // same residual restricted to r < 2 switch_lo
    double defect_near_far = 0.0;       // and to L - r < 2 switch_hi
    double convergence_estimate = 0.0;  // |A(n) - A(n/2)|

    std::vector<double> r, G, dG;  // uniform interior grid, r_i = i L/(n+1)

    // dense solution mesh on [r0, L - u0]; interpolation runs on the scaled
    // variable h = r^2 G, whose derivatives stay O(1) up to the pole
    std::vector<double> mesh_r, mesh_G, mesh_dG, mesh_h, mesh_dh;
    double switch_lo = 0.0, switch_hi = 0.0;  // series zones at the two ends

    double eval_G(double at) const;
    double eval_dG(double at) const;
    double eval_ddG(double at) const;  // recovered from the ODE
    double G_at_far() const { return 1.0 / c1; }
    double min_G() const;

private:
    HermiteQuintic scaled_segment(double at) const;
};

GreenSolution solve_green(const WarpedProfile& p, const SolveOptions& opt = {});

// 12 A - 1; requires |kappa| within tolerance
double mass_from_expansion(const GreenSolution& s);

}  // namespace greenmass
