#include <doctest.h>

#include <cmath>

#include "greenmass/profiles.hpp"

using namespace greenmass;

namespace {
// independent oracle for j2: numeric limit of (J/r^3 - 1)/r^2 with Richardson
double j2_limit_oracle(const WarpedProfile& p) {
    auto g = [&](double r) { return (p.J(r) / (r * r * r) - 1.0) / (r * r); };
    double h = 1e-2;
    return (4.0 * g(h / 2.0) - g(h)) / 3.0;
}
}  // namespace

TEST_SUITE("profiles") {

TEST_CASE("round sphere basics") {
    WarpedProfile p = round_s4_profile();
    CHECK(p.kind == CrossSection::Round);
    CHECK(p.einstein_certified);
    CHECK(p.length == doctest::Approx(kPi));
    CHECK(p.a.f(kPi / 2.0) == doctest::Approx(1.0));  // phi(pi/2) = sin(pi/2)
    CHECK(p.endpoint_class() == EndpointClass::SmoothPoint);

    // scalar curvature 12 both from the profile and from the raw formula
    for (double r : {0.3, 1.0, 2.5}) {
        CHECK(p.rbar(r) == doctest::Approx(12.0));
        double phi = std::sin(r), dphi = std::cos(r), ddphi = -std::sin(r);
        double R = -6.0 * ddphi / phi + 6.0 * (1.0 - dphi * dphi) / (phi * phi);
        CHECK(R == doctest::Approx(12.0).epsilon(1e-12));
        CHECK(kind_a_scalar_curvature(p, r) == doctest::Approx(12.0).epsilon(1e-12));
    }
    CHECK(einstein_residual(p) < 1e-10);
}

TEST_CASE("round volume 8 pi^2 / 3") {
    WarpedProfile p = round_s4_profile();
    double v = volume(p);
    CHECK(v == doctest::Approx(8.0 * kPi * kPi / 3.0).epsilon(1e-10));
}

TEST_CASE("fubini-study profile") {
    WarpedProfile p = fubini_study_profile();
    CHECK(p.kind == CrossSection::Berger);
    CHECK(p.length == doctest::Approx(kPi / std::sqrt(2.0)));
    CHECK(p.b.f(p.length) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.a.f(p.length) == doctest::Approx(std::sqrt(2.0)));
    CHECK(p.endpoint_class() == EndpointClass::CollapsedCircle);

    // volume 2 pi^2, cross-checked by the Gauss-Bonnet/signature arithmetic
    // 2 pi^2 (2 chi + 3 tau) = |W+|^2-energy + 3 Vbar with chi=3, tau=-1, W+=0
    double v = volume(p);
    CHECK(v == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-10));
    double chi = 3, tau = -1;
    CHECK(2.0 * kPi * kPi * (2 * chi + 3 * tau) == doctest::Approx(3.0 * v).epsilon(1e-10));

    CHECK(einstein_residual(p) < 1e-10);
    CHECK_THROWS_AS(kind_a_scalar_curvature(p, 0.5), std::domain_error);
}

TEST_CASE("perturbed profile") {
    WarpedProfile p = perturbed_s4_profile(0.1);
    CHECK_FALSE(p.einstein_certified);
    CHECK(p.kind == CrossSection::Round);

    // closure conditions
    double h = 1e-6;
    CHECK(p.a.f(h) / h == doctest::Approx(1.0).epsilon(1e-9));          // phi'(0) = 1
    CHECK(-p.a.f(kPi - h) / h == doctest::Approx(-1.0).epsilon(1e-9));  // phi'(pi) = -1
    CHECK(p.a.d1(0.0) == doctest::Approx(1.0));
    CHECK(p.a.d1(kPi) == doctest::Approx(-1.0));

    // frozen oracle: R(pi/2) = 1458/121 for eps = 1/10
    CHECK(kind_a_scalar_curvature(p, kPi / 2.0) ==
          doctest::Approx(1458.0 / 121.0).epsilon(1e-13));
    CHECK(kind_a_scalar_curvature(p, kPi / 2.0) != doctest::Approx(12.0).epsilon(1e-4));

    // R(0) limit = 12 - 72 eps, from the series and from small radii
    CHECK(p.rbar_pole[0] == doctest::Approx(12.0 - 7.2).epsilon(1e-12));
    CHECK(kind_a_scalar_curvature(p, 1e-5) == doctest::Approx(4.8).epsilon(1e-6));
    CHECK(p.rbar(1e-5) == doctest::Approx(4.8).epsilon(1e-8));

    // frozen oracle: Vbar(eps=0.1) = 132424 pi^2 / 39375, above the round value
    IntegralResult v = volume_integral(p);
    double target = 132424.0 * kPi * kPi / 39375.0;
    CHECK(v.value == doctest::Approx(target).epsilon(1e-10));
    CHECK(v.value > 8.0 * kPi * kPi / 3.0);
    // refinement consistency to 1e-10 relative
    REQUIRE(v.refinement_table.size() >= 2);
    double last = std::abs(v.refinement_table.back().value -
                           v.refinement_table[v.refinement_table.size() - 2].value);
    CHECK(last < 1e-10 * v.value);

    CHECK(einstein_residual(p) > 1e-2);  // genuinely non-Einstein

    CHECK_THROWS_AS(perturbed_s4_profile(0.6), std::invalid_argument);
    CHECK_THROWS_AS(perturbed_s4_profile(-0.5), std::invalid_argument);
}

TEST_CASE("eps = 0 reduces to the round profile") {
    WarpedProfile p = perturbed_s4_profile(0.0);
    WarpedProfile r = round_s4_profile();
    for (double x : {0.2, 1.1, 2.7}) {
        CHECK(p.a.f(x) == doctest::Approx(r.a.f(x)).epsilon(1e-15));
        CHECK(p.rbar(x) == doctest::Approx(12.0).epsilon(1e-12));
    }
}

TEST_CASE("density limit J/r^3 -> 1 with Richardson consistency") {
    for (const WarpedProfile& p :
         {round_s4_profile(), fubini_study_profile(), perturbed_s4_profile(0.1)}) {
        auto g = [&](double r) { return p.J(r) / (r * r * r); };
        double g3 = g(1e-3), g4 = g(1e-4);
        // both near 1, and the Richardson-combined value consistent to 1e-6
        CHECK(std::abs(g3 - 1.0) < 1e-5);
        CHECK(std::abs((100.0 * g4 - g3) / 99.0 - 1.0) < 1e-6);
    }
}

TEST_CASE("einstein certification implies R = 12 on a 1024 grid") {
    for (const WarpedProfile& p : {round_s4_profile(), fubini_study_profile()}) {
        double worst = 0.0;
        for (int i = 1; i <= 1024; ++i) {
            double r = p.length * i / 1025.0;
            worst = std::max(worst, std::abs(p.rbar(r) - 12.0));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("kind-A scalar curvature domain checks") {
    WarpedProfile p = round_s4_profile();
    CHECK_THROWS_AS(kind_a_scalar_curvature(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(kind_a_scalar_curvature(p, kPi), std::domain_error);
    CHECK_THROWS_AS(kind_a_scalar_curvature(p, -1.0), std::domain_error);
}

TEST_CASE("profile parsing") {
    CHECK(parse_profile("round-s4").name == "round-s4");
    CHECK(parse_profile("fs-cp2").name == "fs-cp2");
    CHECK(parse_profile("perturbed-s4:eps=0.1").einstein_certified == false);
    CHECK_THROWS_AS(parse_profile("nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile("perturbed-s4:eps=abc"), std::invalid_argument);
    CHECK(list_profiles().size() == 3);
}

TEST_CASE("j2 from the density series matches the numeric-limit oracle") {
    for (const WarpedProfile& p :
         {round_s4_profile(), fubini_study_profile(), perturbed_s4_profile(0.1)}) {
        CHECK(p.e_pole[2] == doctest::Approx(j2_limit_oracle(p)).epsilon(1e-6));
    }
    CHECK(round_s4_profile().e_pole[2] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(fubini_study_profile().e_pole[2] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(perturbed_s4_profile(0.1).e_pole[2] == doctest::Approx(-0.2).epsilon(1e-13));
}

TEST_CASE("reduced log-density helper is stable near the pole") {
    WarpedProfile p = round_s4_profile();
    // J'/J - 3/r = 3 (cot r - 1/r) = -r - r^3/15 - 2 r^5/315 - ...
    for (double r : {1e-4, 1e-3, 1e-2}) {
        double expect = -r - r * r * r / 15.0 - 2.0 * std::pow(r, 5) / 315.0;
        CHECK(p.dlogJ_reduced(r) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(p.dlogJ_reduced_over_r(r) == doctest::Approx(expect / r).epsilon(1e-10));
    }
    // away from the pole the closed form applies directly
    double direct = 3.0 * (std::cos(0.5) / std::sin(0.5) - 2.0);
    CHECK(p.dlogJ_reduced(0.5) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(p.dlogJ_reduced_over_r(0.5) == doctest::Approx(direct / 0.5).epsilon(1e-12));
}

}  // TEST_SUITE
