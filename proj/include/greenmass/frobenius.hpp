#pragma once

#include <cstddef>
#include <vector>

#include "greenmass/profiles.hpp"
#include "greenmass/series.hpp"

namespace greenmass {

// Local bases of G'' + (J'/J) G' - (R/6) G = 0 at the pole (indicial roots -2
// and 0). The singular branch carries the resonance convention b2 = 0, and a
// log admixture kappa * u2 * log r whenever the resonance obstructs:
//   u1 = r^-2 (1 + sum b_k r^k) + kappa * u2(r) * log r
//   u2 = 1 + sum q_k r^k
struct PoleExpansion {
    std::vector<double> b_coeffs;  // b_0 = 1
    std::vector<double> q_coeffs;  // q_0 = 1
    double kappa = 0.0;
    std::size_t order = 0;
    double radius_hint = 0.0;

    double u1(double r) const;
    double du1(double r) const;
    double ddu1(double r) const;
    double u2(double r) const;
    double du2(double r) const;
    double ddu2(double r) const;
    // h = r^2 u1 and h', evaluated directly from the series; forming them
    // through u1 would cancel two ~2/r terms and poison the slope near 0
    double scaled_h(double r) const;
    double scaled_dh(double r) const;
    // crude bound on the relative series truncation error at radius r
    double truncation_estimate(double r) const;
};

struct FarExpansion {
    EndpointClass endpoint_class = EndpointClass::SmoothPoint;
    std::vector<double> v_coeffs;  // v = 1 + sum v_k u^k, regular branch
    std::size_t order = 0;
    double radius_hint = 0.0;

    double v(double u) const;
    double dv(double u) const;  // d/du
    double truncation_estimate(double u) const;
};

// E(r) with J = r^3 E and E(0) = 1; coefficient [2] is j2 = -Ric_rr(0)/6.
Series density_series(const WarpedProfile& p, std::size_t order);

PoleExpansion pole_basis(const WarpedProfile& p, std::size_t order);
FarExpansion far_basis(const WarpedProfile& p, std::size_t order);

// Internal recurrence shared by both endpoints, exposed for tests. Solves the
// branch with exponent s of y'' + (mu/x + P(x)) y' - q(x) y = 0. When the
// resonance at k = -2s obstructs (only reachable for s = -2, mu = 3), kappa
// receives the log coefficient and the resonant coefficient is set to zero.
std::vector<double> frobenius_branch(const Series& P, const Series& q, double mu, int s,
                                     std::size_t order, double* kappa);

}  // namespace greenmass
