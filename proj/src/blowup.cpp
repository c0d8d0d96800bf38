#include "greenmass/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greenmass {

namespace {

void require_einstein(const BlowupFields& f, const char* who) {
    if (!f.profile || !f.profile->einstein_certified)
        throw std::domain_error(std::string(who) + ": requires an Einstein-certified profile");
}

}  // namespace

FieldPoint eval_field_point(const WarpedProfile& p, const GreenSolution& s, double r) {
    FieldPoint o;
    o.r = r;
    o.G = s.eval_G(r);
    o.dG = s.eval_dG(r);
    o.ddG = s.eval_ddG(r);
    const double G = o.G, dG = o.dG, ddG = o.ddG;

    // |grad_g G|^2 = g^{rr} (G')^2 = G^-2 (G')^2
    o.gradG2 = (dG / G) * (dG / G);
    o.F = (1.0 + o.gradG2) / G - 4.0;
    // F = G^-1 + G^-3 (G')^2 - 4, differentiated with G'' from the ODE
    o.dF = -dG / (G * G) - 3.0 * dG * dG * dG / (G * G * G * G) +
           2.0 * dG * ddG / (G * G * G);

    o.lam_r = ddG - dG * dG / G;
    o.lam_a = p.a.d1(r) / p.a.f(r) * dG + dG * dG / G;
    o.lam_b = p.b.d1(r) / p.b.f(r) * dG + dG * dG / G;
    double trace = o.lam_r + 2.0 * o.lam_a + o.lam_b;
    o.lapG = trace / (G * G);
    // trace-free parts through eigenvalue differences: the lam_i are each
    // ~2/r^4 near the pole while their deviations are O(1/r^2), so forming
    // sum(lam^2) - trace^2/4 directly would cancel eight orders
    double d_ra = ddG - 2.0 * dG * dG / G - p.a.d1(r) / p.a.f(r) * dG;  // lam_r - lam_a
    double d_ab = (p.a.d1(r) / p.a.f(r) - p.b.d1(r) / p.b.f(r)) * dG;  // lam_a - lam_b
    double mu_r = (3.0 * d_ra + d_ab) / 4.0;
    double mu_a = (-d_ra + d_ab) / 4.0;
    double mu_b = (-d_ra - 3.0 * d_ab) / 4.0;
    o.tfHess2 = (mu_r * mu_r + 2.0 * mu_a * mu_a + mu_b * mu_b) / (G * G * G * G);
    o.P_rr = -mu_r / G;
    o.weight = 2.0 * kPi * kPi * G * G * G * G * p.J(r);
    return o;
}

BlowupFields compute_fields(const WarpedProfile& p, const GreenSolution& s) {
    BlowupFields f;
    f.profile = &s.profile;
    f.sol = &s;
    std::size_t n = s.r.size();
    auto reserve = [&](std::vector<double>& v) { v.resize(n); };
    reserve(f.r);
    reserve(f.G);
    reserve(f.dG);
    reserve(f.gradG2);
    reserve(f.F);
    reserve(f.dF);
    reserve(f.lam_r);
    reserve(f.lam_a);
    reserve(f.lam_b);
    reserve(f.lapG);
    reserve(f.tfHess2);
    reserve(f.P_rr);
    reserve(f.weight);
    for (std::size_t i = 0; i < n; ++i) {
        FieldPoint o = eval_field_point(p, s, s.r[i]);
        f.r[i] = o.r;
        f.G[i] = o.G;
        f.dG[i] = o.dG;
        f.gradG2[i] = o.gradG2;
        f.F[i] = o.F;
        f.dF[i] = o.dF;
        f.lam_r[i] = o.lam_r;
        f.lam_a[i] = o.lam_a;
        f.lam_b[i] = o.lam_b;
        f.lapG[i] = o.lapG;
        f.tfHess2[i] = o.tfHess2;
        f.P_rr[i] = o.P_rr;
        f.weight[i] = o.weight;
    }
    return f;
}

namespace {

double dg_residual_impl(const BlowupFields& f) {
    const WarpedProfile& p = *f.profile;
    std::size_t n = f.r.size();
    if (n < 8) throw std::domain_error("residual_DG: grid too small");
    double dr = f.r[1] - f.r[0];

    // independent second derivative through h = r^2 G (smooth at the pole);
    // the stride keeps the stencil step near L/1024 so the second difference
    // stays above its rounding floor on fine grids
    std::vector<double> hh(n);
    for (std::size_t i = 0; i < n; ++i) hh[i] = f.r[i] * f.r[i] * f.G[i];
    const std::size_t k = std::max<std::size_t>(1, n / 1024);
    const double step = k * dr;

    double worst = 0.0, scale = 0.0;
    std::vector<double> lap(n, 0.0);
    for (std::size_t i = 2 * k; i + 2 * k < n; ++i) {
        double d2h = (-hh[i - 2 * k] + 16.0 * hh[i - k] - 30.0 * hh[i] + 16.0 * hh[i + k] -
                      hh[i + 2 * k]) /
                     (12.0 * step * step);
        double ri = f.r[i];
        // G'' = h''/r^2 - 4 G'/r - 2 G/r^2  (from h = r^2 G)
        double ddG = d2h / (ri * ri) - 4.0 * f.dG[i] / ri - 2.0 * f.G[i] / (ri * ri);
        double G = f.G[i], dG = f.dG[i];
        // Lap_g G = G^-2 (Lapbar G + 2 (G')^2/G), Lapbar G = G'' + (J'/J) G'
        lap[i] = (ddG + p.dlogJ(ri) * dG + 2.0 * dG * dG / G) / (G * G);
        scale = std::max(scale, std::abs(lap[i]));
    }
    for (std::size_t i = 2 * k; i + 2 * k < n; ++i) {
        double G = f.G[i];
        double rhs = 2.0 / G * (1.0 + f.gradG2[i]);
        worst = std::max(worst, std::abs(lap[i] - rhs));
    }
    return worst / scale;
}

}  // namespace

double residual_DG(const BlowupFields& f) {
    require_einstein(f, "residual_DG");
    return dg_residual_impl(f);
}

double residual_DG_general(const BlowupFields& f) { return dg_residual_impl(f); }

double residual_dF_schouten(const BlowupFields& f) {
    require_einstein(f, "residual_dF_schouten");
    std::size_t n = f.r.size();
    // fields are O(1) in g-units; the scale floor keeps the degenerate round
    // case (both sides identically zero) from dividing noise by noise
    double worst = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double trace = f.lam_r[i] + 2.0 * f.lam_a[i] + f.lam_b[i];
        double rhs = 2.0 * (f.lam_r[i] - trace / 4.0) * f.dG[i] / (f.G[i] * f.G[i] * f.G[i]);
        scale = std::max({scale, std::abs(f.dF[i]), std::abs(rhs)});
        worst = std::max(worst, std::abs(f.dF[i] - rhs));
    }
    return worst / scale;
}

double residual_laplace_F(const BlowupFields& f) {
    require_einstein(f, "residual_laplace_F");
    const GreenSolution& s = *f.sol;
    const WarpedProfile& p = *f.profile;
    std::size_t n = f.r.size();
    if (n < 8) throw std::domain_error("residual_laplace_F: grid too small");

    // Lap_g F = (G^4 J)^-1 (G^2 J F')' = G^-2 F'' + (2 G'/G + J'/J) G^-2 F'
    // with F'' analytic (q' = 0 on Einstein profiles):
    //   F'' = 2 G^-3 G'^2 - G^-2 G'' + 12 G^-5 G'^4 - 15 G^-4 G'^2 G''
    //         + 2 G^-3 G''^2 + 2 G^-3 G' G'''
    //   G''' = -(J'/J)' G' - (J'/J) G'' + q G'
    std::vector<double> lapF(n, 0.0);
    double scale = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double ri = f.r[i];
        double G = f.G[i], dG = f.dG[i];
        double ddG = s.eval_ddG(ri);
        double q = p.rbar(ri) / 6.0;
        double dddG = -p.ddlogJ(ri) * dG - p.dlogJ(ri) * ddG + q * dG;
        double G2 = G * G, G3 = G2 * G, G4 = G3 * G, G5 = G4 * G;
        double ddF = 2.0 * dG * dG / G3 - ddG / G2 + 12.0 * dG * dG * dG * dG / G5 -
                     15.0 * dG * dG * ddG / G4 + 2.0 * ddG * ddG / G3 + 2.0 * dG * dddG / G3;
        lapF[i] = ddF / G2 + (2.0 * dG / G + p.dlogJ(ri)) * f.dF[i] / G2;
        scale = std::max(scale, std::abs(lapF[i]));
    }
    scale = std::max(scale, 1.0);  // O(1) floor for the identically-zero round case
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double rhs = 2.0 / f.G[i] * f.tfHess2[i];
        worst = std::max(worst, std::abs(lapF[i] - rhs));
    }
    return worst / scale;
}

double f_asymptote_mass(const BlowupFields& f, double tol) {
    const GreenSolution& s = *f.sol;
    if (std::abs(s.kappa) > s.options.kappa_tol)
        throw std::domain_error("f_asymptote_mass: log branch live, expansion invalid");
    const WarpedProfile& p = *f.profile;
    double r0 = s.r0;
    // F = -m r^2 + O(r^4) in inverted normal coordinates with |x| = 1/r
    auto m_of = [&](double rr) { return -eval_field_point(p, s, rr).F / (rr * rr); };
    double m1 = m_of(r0), m2 = m_of(2.0 * r0), m4 = m_of(4.0 * r0);
    double R1 = (4.0 * m1 - m2) / 3.0;
    double R1b = (4.0 * m2 - m4) / 3.0;
    double inconsistency = std::abs(R1 - R1b);
    if (inconsistency > tol * std::max(1.0, std::abs(R1)))
        throw std::domain_error("f_asymptote_mass: extrapolation inconsistent by " +
                                std::to_string(inconsistency));
    return (16.0 * R1 - R1b) / 15.0;
}

double max_F(const BlowupFields& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : f.F) m = std::max(m, v);
    return m;
}

double gradient_estimate_violation(const BlowupFields& f) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.r.size(); ++i) {
        double v = (f.gradG2[i] - 4.0 * f.G[i] + 1.0) / std::max(1.0, 4.0 * f.G[i]);
        worst = std::max(worst, v);
    }
    return worst;
}

double gradient_estimate_deviation(const BlowupFields& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.r.size(); ++i) {
        double v = std::abs(f.gradG2[i] - 4.0 * f.G[i] + 1.0) / std::max(1.0, 4.0 * f.G[i]);
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace greenmass
