#include <doctest.h>

#include <cmath>

#include "greenmass/quadrature.hpp"

using namespace greenmass;

namespace {

GreenSolution& round_sol() {
    static GreenSolution sol = [] {
        SolveOptions opt;
        opt.n = 1024;
        opt.estimate_convergence = false;
        return solve_green(round_s4_profile(), opt);
    }();
    return sol;
}

GreenSolution& fs_sol() {
    static GreenSolution sol = [] {
        SolveOptions opt;
        opt.n = 2048;
        opt.estimate_convergence = false;
        return solve_green(fubini_study_profile(), opt);
    }();
    return sol;
}

GreenSolution& pert_sol() {
    static GreenSolution sol = [] {
        SolveOptions opt;
        opt.n = 1024;
        opt.estimate_convergence = false;
        return solve_green(perturbed_s4_profile(0.1), opt);
    }();
    return sol;
}

constexpr double pi2 = kPi * kPi;

// independent oracle for the pole flux: -G'(r) * 2 pi^2 J(r) -> 4 pi^2
double pole_flux_oracle(const GreenSolution& s) {
    auto flux = [&](double r) { return -s.eval_dG(r) * 2.0 * pi2 * s.profile.J(r); };
    double r0 = s.r0;
    double f1 = flux(r0), f2 = flux(2.0 * r0);
    return (4.0 * f1 - f2) / 3.0;  // flux(r) = 4 pi^2 + c r^2 + ...
}

void check_refinement_invariant(const IntegralResult& r) {
    REQUIRE(r.refinement_table.size() >= 2);
    double last = std::abs(r.refinement_table.back().value -
                           r.refinement_table[r.refinement_table.size() - 2].value);
    CHECK(last <= r.error_estimate);
    CHECK(std::isfinite(r.error_estimate));
    CHECK(r.endpoint_subtraction_order == 2);
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("round integral identities") {
    GreenSolution& sol = round_sol();
    BlowupFields f = compute_fields(sol.profile, sol);
    double Vbar = volume(sol.profile);

    IntegralResult ig1 = integral_IG1(sol);
    CHECK(ig1.value == doctest::Approx(2.0 * Vbar).epsilon(1e-8));
    CHECK(ig1.value == doctest::Approx(16.0 * pi2 / 3.0).epsilon(1e-6));
    check_refinement_invariant(ig1);

    IntegralResult ig2 = integral_IG2(sol);
    CHECK(ig2.value == doctest::Approx(2.0 * pi2).epsilon(1e-8));
    check_refinement_invariant(ig2);

    IntegralResult fg = integral_FG(sol, f);
    CHECK(std::abs(fg.value) < 1e-8);

    IntegralResult ih = integral_hess(f);
    CHECK(std::abs(ih.value) < 1e-8);

    IntegralResult igf = integral_gradF(f);
    CHECK(std::abs(igf.value) < 1e-8);

    IntegralResult irho = integral_Irho_limit(f, sol);
    CHECK(std::abs(irho.value) < 1e-8);

    IntegralResult lg = integral_LG_flux(sol);
    CHECK(lg.value == doctest::Approx(4.0 * pi2).epsilon(1e-8));
}

TEST_CASE("IG1 integrand behaves like 4r near the pole") {
    GreenSolution& sol = round_sol();
    const WarpedProfile& p = sol.profile;
    for (double r : {1e-4, 1e-3}) {
        double G = sol.eval_G(r), dG = sol.eval_dG(r);
        double integrand = (dG / G) * (dG / G) * p.J(r);  // against dvbar/(2pi^2)
        CHECK(integrand == doctest::Approx(4.0 * r).epsilon(1e-4));
    }
}

TEST_CASE("fubini-study integral identities") {
    GreenSolution& sol = fs_sol();
    BlowupFields f = compute_fields(sol.profile, sol);
    double Vbar = volume(sol.profile);
    CHECK(Vbar == doctest::Approx(2.0 * pi2).epsilon(1e-10));

    IntegralResult ig1 = integral_IG1(sol);
    CHECK(ig1.value == doctest::Approx(4.0 * pi2).epsilon(1e-5));

    IntegralResult ig2 = integral_IG2(sol);
    CHECK(ig2.value == doctest::Approx(2.0 * pi2).epsilon(1e-5));

    IntegralResult fg = integral_FG(sol, f);
    CHECK(fg.value == doctest::Approx(2.0 * pi2).epsilon(1e-4));
    // algebraic rearrangement: -Int F G = -Vbar - IG1 + 4 IG2
    CHECK(fg.value ==
          doctest::Approx(-Vbar - ig1.value + 4.0 * ig2.value).epsilon(1e-6));

    IntegralResult ih = integral_hess(f);
    IntegralResult igf = integral_gradF(f);
    // Theorem-level split: I_hess + I_F = 12 pi^2 given m = 1. The ranges are
    // closed and FS sits exactly on the boundary: the Burns blow-up satisfies
    // F = -1/G identically, so I_F saturates the Cauchy-Schwarz lower bound
    // 4 pi^2 and I_hess the complementary 8 pi^2.
    CHECK(ih.value + igf.value == doctest::Approx(12.0 * pi2).epsilon(1e-3));
    CHECK(ih.value > 4.8 * pi2);
    CHECK(ih.value <= 8.0 * pi2 * (1.0 + 1e-6));
    CHECK(igf.value >= 4.0 * pi2 * (1.0 - 1e-6));
    CHECK(igf.value < 7.2 * pi2);
    CHECK(ih.value == doctest::Approx(8.0 * pi2).epsilon(1e-5));
    CHECK(igf.value == doctest::Approx(4.0 * pi2).epsilon(1e-5));

    IntegralResult irho = integral_Irho_limit(f, sol);
    CHECK(irho.value == doctest::Approx(4.0 * pi2).epsilon(1e-3));
    // Cauchy-Schwarz chain
    CHECK(irho.value <= std::sqrt(igf.value * 2.0 * Vbar) + 1e-8);

    // assembled identity residual
    REQUIRE(sol.mass_series.has_value());
    CHECK(mv1_residual(*sol.mass_series, Vbar, ih.value, igf.value) < 1e-3 * 16.0 * pi2);

    check_refinement_invariant(ih);
    check_refinement_invariant(igf);
    check_refinement_invariant(irho);
}

TEST_CASE("energy integrands vanish at both endpoints") {
    GreenSolution& sol = fs_sol();
    const WarpedProfile& p = sol.profile;
    double L = p.length;
    auto hess_integrand = [&](double r) {
        FieldPoint o = eval_field_point(p, sol, r);
        return o.tfHess2 * o.gradG2 * o.G * o.G * p.J(r);
    };
    auto gradF_integrand = [&](double r) {
        FieldPoint o = eval_field_point(p, sol, r);
        return o.dF * o.dF * o.G * o.G * p.J(r);
    };
    double mid_h = std::abs(hess_integrand(L / 2.0));
    double mid_f = std::abs(gradF_integrand(L / 2.0));
    for (double r : {5e-4, L - 5e-4}) {
        CHECK(std::abs(hess_integrand(r)) < 1e-2 * mid_h);
        CHECK(std::abs(gradF_integrand(r)) < 1e-2 * mid_f);
    }
}

TEST_CASE("endpoint subtraction and the plain path agree on a field integral") {
    GreenSolution& sol = round_sol();
    const WarpedProfile& p = sol.profile;
    double L = p.length;
    IntegralResult sub = integral_IG1(sol);
    auto integrand = [&](double r) {
        if (r <= 1e-4 * L || r >= L - 1e-4 * L) return 0.0;
        double G = sol.eval_G(r), dG = sol.eval_dG(r);
        return 2.0 * pi2 * (dG / G) * (dG / G) * p.J(r);
    };
    IntegralResult plain = integrate_refined(integrand, 0.0, L, {});
    CHECK(std::abs(sub.value - plain.value) <= sub.error_estimate + plain.error_estimate);
}

TEST_CASE("einstein gate on the identity integrals") {
    GreenSolution& sol = pert_sol();
    BlowupFields f = compute_fields(sol.profile, sol);
    CHECK_THROWS_AS(integral_IG2(sol), std::domain_error);
    CHECK_THROWS_AS(integral_FG(sol, f), std::domain_error);
    CHECK_THROWS_AS(integral_hess(f), std::domain_error);
    CHECK_THROWS_AS(integral_gradF(f), std::domain_error);
    CHECK_THROWS_AS(integral_Irho_limit(f, sol), std::domain_error);
}

TEST_CASE("generalized identities hold for the non-Einstein profile") {
    GreenSolution& sol = pert_sol();

    // pole-flux normalization: Int (R/6) G dvbar = 4 pi^2 for any profile
    IntegralResult lg = integral_LG_flux(sol);
    CHECK(lg.value == doctest::Approx(4.0 * pi2).epsilon(1e-4));
    CHECK(lg.value == doctest::Approx(pole_flux_oracle(sol)).epsilon(1e-4));

    // generalized IG1: Int G^-2 |gradbar G|^2 dvbar = Int (R/6) dvbar
    IntegralResult ig1 = integral_IG1(sol);
    const WarpedProfile& p = sol.profile;
    auto rbar_density = [&](double r) {
        if (r <= 0.0 || r >= p.length) return 0.0;
        return 2.0 * pi2 * p.rbar(r) / 6.0 * p.J(r);
    };
    IntegralResult rint = integrate_with_endpoint_subtraction(rbar_density, 0.0, p.length,
                                                              p.series_switch_radius());
    CHECK(ig1.value == doctest::Approx(rint.value).epsilon(1e-4));

    // and for Einstein inputs that generalization collapses to 2 Vbar
    GreenSolution& rsol = round_sol();
    CHECK(integral_IG1(rsol).value ==
          doctest::Approx(2.0 * volume(rsol.profile)).epsilon(1e-8));
}

}  // TEST_SUITE
