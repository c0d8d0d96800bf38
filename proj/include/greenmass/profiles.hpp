#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "greenmass/integrate.hpp"
#include "greenmass/series.hpp"

namespace greenmass {

// Kind A (round cross-sections, a == b) versus Kind B (Berger cross-sections).
enum class CrossSection { Round, Berger };
enum class EndpointClass { SmoothPoint, CollapsedCircle };

struct ProfileFn {
    std::function<double(double)> f, d1, d2;
};

// A cohomogeneity-one background metric dr^2 + a(r)^2 (s1^2+s2^2) + b(r)^2 s3^2
// on [0, L], with the left-invariant coframe normalized by ds_i = -2 s_j ^ s_k,
// so geodesic spheres about the pole have volume 2 pi^2 a^2 b.
//
// Immutable after construction; evaluation is pure.
struct WarpedProfile {
    std::string name;
    CrossSection kind = CrossSection::Round;
    double length = 0.0;  // L; also the diameter along radial geodesics
    bool einstein_certified = false;

    ProfileFn a, b;
    std::function<double(double)> rbar;  // scalar curvature, endpoint-safe

    // Taylor data at the endpoints (x = r at the pole, u = L - r at the far end)
    Series a_pole{0}, b_pole{0}, a_far{0}, b_far{0};
    Series rbar_pole{0}, rbar_far{0};
    Series e_pole{0};  // E with J = r^3 E(r) and E(0) = 1

    double J(double r) const { return a.f(r) * a.f(r) * b.f(r); }
    double dlogJ(double r) const { return 2.0 * a.d1(r) / a.f(r) + b.d1(r) / b.f(r); }
    // (J'/J)' = 2 (a''/a - (a'/a)^2) + b''/b - (b'/b)^2
    double ddlogJ(double r) const;
    // J'/J - 3/r, evaluated through the density series near the pole
    double dlogJ_reduced(double r) const;
    // (J'/J - 3/r)/r, finite down to r = 0
    double dlogJ_reduced_over_r(double r) const;

    EndpointClass endpoint_class() const;
    // radius inside which endpoint Taylor series are preferred to closed forms
    double series_switch_radius() const { return 0.04 * length; }
};

WarpedProfile round_s4_profile();
WarpedProfile fubini_study_profile();
// phi_eps(r) = sin r (1 + eps sin^2 r); requires |eps| < 0.5
WarpedProfile perturbed_s4_profile(double eps);

// Accepts "round-s4", "fs-cp2", "perturbed-s4:eps=<v>"
WarpedProfile parse_profile(std::string_view name);
struct ProfileInfo {
    std::string name, description;
};
std::vector<ProfileInfo> list_profiles();

// R(r) = -6 phi''/phi + 6 (1 - phi'^2)/phi^2 for round cross-sections.
double kind_a_scalar_curvature(const WarpedProfile& p, double r);

// Even Taylor series of the Kind-A scalar curvature from an odd series of phi.
Series kind_a_rbar_series(const Series& phi, std::size_t order);

// max |Ric - 3 gbar| over an interior sample grid, orthonormal frame components:
//   Ric_rr = -2 a''/a - b''/b
//   Ric_aa = -a''/a - (a'/a)^2 - a'b'/(ab) + 4/a^2 - 2 b^2/a^4
//   Ric_bb = -b''/b - 2 a'b'/(ab) + 2 b^2/a^4
double einstein_residual(const WarpedProfile& p, int samples = 257);

// Vbar = 2 pi^2 Int_0^L a^2 b dr
IntegralResult volume_integral(const WarpedProfile& p);
double volume(const WarpedProfile& p);

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace greenmass
