#include "greenmass/profiles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace greenmass {

namespace {

constexpr std::size_t kSeriesOrder = 24;

Series density_series_from(const Series& ap, const Series& bp) {
    // J = a^2 b = r^3 E(r)
    return (ap * ap * bp).shift_down(3);
}

void finish_profile(WarpedProfile& p) {
    p.e_pole = density_series_from(p.a_pole, p.b_pole);
}

}  // namespace

Series kind_a_rbar_series(const Series& phi, std::size_t order) {
    // phi = x Phi(x) with Phi(0) = 1 and Phi even.
    Series Phi = phi.shift_down(1);
    Series ddphi = phi.derivative().derivative();       // odd, valuation 1
    Series t1 = (ddphi.shift_down(1) / Phi) * (-6.0);   // -6 phi''/phi
    Series dphi = phi.derivative();
    Series one = Series::constant(1.0, dphi.order());
    Series N = one - dphi * dphi;                       // even, valuation 2
    Series t2 = (N.shift_down(2) / (Phi * Phi)) * 6.0;  // 6 (1 - phi'^2)/phi^2
    Series r = t1 + t2;
    Series out(order);
    for (std::size_t k = 0; k <= order; ++k) out.at(k) = r[k];
    return out;
}

double WarpedProfile::ddlogJ(double r) const {
    double ar = a.f(r), dar = a.d1(r), ddar = a.d2(r);
    double br = b.f(r), dbr = b.d1(r), ddbr = b.d2(r);
    return 2.0 * (ddar / ar - (dar / ar) * (dar / ar)) + ddbr / br - (dbr / br) * (dbr / br);
}

double WarpedProfile::dlogJ_reduced(double r) const {
    if (r < series_switch_radius()) {
        // J'/J - 3/r = E'/E
        return e_pole.eval_derivative(r) / e_pole.eval(r);
    }
    return (a.d1(r) / a.f(r) - 1.0 / r) * 2.0 + (b.d1(r) / b.f(r) - 1.0 / r);
}

double WarpedProfile::dlogJ_reduced_over_r(double r) const {
    if (r < series_switch_radius()) {
        // E'/E is odd with zero constant term, so (E'/r)/E is regular at 0.
        Series de = e_pole.derivative();
        double dep_over_r = 0.0;
        double xk = 1.0;
        for (std::size_t k = 1; k <= de.order(); k += 2) {
            dep_over_r += de[k] * xk;
            xk *= r * r;
        }
        return dep_over_r / e_pole.eval(r);
    }
    return dlogJ_reduced(r) / r;
}

EndpointClass WarpedProfile::endpoint_class() const {
    const double tol = 1e-9;
    double a0 = a_far[0], b0 = b_far[0];
    if (std::abs(b0) < tol && std::abs(a0) < tol) {
        if (std::abs(std::abs(a_far[1]) - 1.0) > 1e-6 || std::abs(std::abs(b_far[1]) - 1.0) > 1e-6)
            throw std::domain_error("endpoint_class: smooth point closure violated");
        return EndpointClass::SmoothPoint;
    }
    if (std::abs(b0) < tol && a0 > tol) return EndpointClass::CollapsedCircle;
    throw std::domain_error("endpoint_class: unclassifiable far endpoint");
}

WarpedProfile round_s4_profile() {
    WarpedProfile p;
    p.name = "round-s4";
    p.kind = CrossSection::Round;
    p.length = kPi;
    p.einstein_certified = true;
    ProfileFn s{[](double r) { return std::sin(r); }, [](double r) { return std::cos(r); },
                [](double r) { return -std::sin(r); }};
    p.a = s;
    p.b = s;
    p.rbar = [](double) { return 12.0; };
    p.a_pole = sin_series(1.0, kSeriesOrder);
    p.b_pole = p.a_pole;
    p.a_far = p.a_pole;  // sin(pi - u) = sin u
    p.b_far = p.a_pole;
    p.rbar_pole = Series::constant(12.0, kSeriesOrder);
    p.rbar_far = p.rbar_pole;
    finish_profile(p);
    return p;
}

WarpedProfile fubini_study_profile() {
    WarpedProfile p;
    p.name = "fs-cp2";
    p.kind = CrossSection::Berger;
    const double s2 = std::sqrt(2.0);
    p.length = kPi / s2;
    p.einstein_certified = true;
    p.a = ProfileFn{[s2](double r) { return s2 * std::sin(r / s2); },
                    [s2](double r) { return std::cos(r / s2); },
                    [s2](double r) { return -std::sin(r / s2) / s2; }};
    p.b = ProfileFn{[s2](double r) { return std::sin(s2 * r) / s2; },
                    [s2](double r) { return std::cos(s2 * r); },
                    [s2](double r) { return -s2 * std::sin(s2 * r); }};
    p.rbar = [](double) { return 12.0; };
    p.a_pole = sin_series(1.0 / s2, kSeriesOrder) * s2;
    p.b_pole = sin_series(s2, kSeriesOrder) * (1.0 / s2);
    p.a_far = cos_series(1.0 / s2, kSeriesOrder) * s2;  // a(L - u) = sqrt2 cos(u/sqrt2)
    p.b_far = p.b_pole;                                 // b(L - u) = sin(sqrt2 u)/sqrt2
    p.rbar_pole = Series::constant(12.0, kSeriesOrder);
    p.rbar_far = p.rbar_pole;
    finish_profile(p);
    return p;
}

WarpedProfile perturbed_s4_profile(double eps) {
    if (!(std::abs(eps) < 0.5))
        throw std::invalid_argument("perturbed_s4_profile: |eps| must be < 0.5");
    WarpedProfile p;
    std::ostringstream nm;
    nm << "perturbed-s4:eps=" << eps;
    p.name = nm.str();
    p.kind = CrossSection::Round;
    p.length = kPi;
    p.einstein_certified = false;
    auto f = [eps](double r) {
        double s = std::sin(r);
        return s * (1.0 + eps * s * s);
    };
    auto d1 = [eps](double r) {
        double s = std::sin(r), c = std::cos(r);
        return c * (1.0 + 3.0 * eps * s * s);
    };
    auto d2 = [eps](double r) {
        double s = std::sin(r), c = std::cos(r);
        return -s * (1.0 + 3.0 * eps * s * s) + 6.0 * eps * s * c * c;
    };
    p.a = ProfileFn{f, d1, d2};
    p.b = p.a;
    // interior positivity: 1 + eps sin^2 >= 1 - |eps| > 0 under the precondition,
    // but scan anyway so a future family change cannot slip through
    for (int i = 1; i < 256; ++i) {
        double r = kPi * i / 256.0;
        if (!(f(r) > 0.0)) throw std::invalid_argument("perturbed_s4_profile: phi <= 0 in (0, L)");
    }
    Series s = sin_series(1.0, kSeriesOrder);
    Series phi = s * (Series::constant(1.0, kSeriesOrder) + s * s * eps);
    p.a_pole = phi;
    p.b_pole = phi;
    p.a_far = phi;  // phi(pi - u) = phi(u)
    p.b_far = phi;
    p.rbar_pole = kind_a_rbar_series(phi, kSeriesOrder);
    p.rbar_far = p.rbar_pole;
    finish_profile(p);

    double sw = p.series_switch_radius();
    double L = p.length;
    Series rp = p.rbar_pole, rf = p.rbar_far;
    p.rbar = [rp, rf, sw, L, f, d1, d2](double r) {
        if (r < sw) return rp.eval(r);
        if (L - r < sw) return rf.eval(L - r);
        double ph = f(r), dph = d1(r), ddph = d2(r);
        return -6.0 * ddph / ph + 6.0 * (1.0 - dph * dph) / (ph * ph);
    };
    return p;
}

WarpedProfile parse_profile(std::string_view name) {
    if (name == "round-s4") return round_s4_profile();
    if (name == "fs-cp2") return fubini_study_profile();
    const std::string_view pfx = "perturbed-s4:eps=";
    if (name.substr(0, pfx.size()) == pfx) {
        std::string tail(name.substr(pfx.size()));
        std::size_t pos = 0;
        double eps = 0.0;
        try {
            eps = std::stod(tail, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_profile: bad eps value '" + tail + "'");
        }
        if (pos != tail.size())
            throw std::invalid_argument("parse_profile: bad eps value '" + tail + "'");
        return perturbed_s4_profile(eps);
    }
    throw std::invalid_argument("parse_profile: unknown profile '" + std::string(name) + "'");
}

std::vector<ProfileInfo> list_profiles() {
    return {
        {"round-s4", "round sphere, a=b=sin r, L=pi, Einstein (R=12)"},
        {"fs-cp2", "Fubini-Study CP^2, Berger cross-sections, L=pi/sqrt2, Einstein (R=12)"},
        {"perturbed-s4:eps=<v>", "sin r (1+eps sin^2 r), |eps|<0.5, non-Einstein test family"},
    };
}

double kind_a_scalar_curvature(const WarpedProfile& p, double r) {
    if (p.kind != CrossSection::Round)
        throw std::domain_error("kind_a_scalar_curvature: round cross-sections only");
    if (!(r > 0.0 && r < p.length))
        throw std::domain_error("kind_a_scalar_curvature: r outside (0, L)");
    double ph = p.a.f(r), dph = p.a.d1(r), ddph = p.a.d2(r);
    return -6.0 * ddph / ph + 6.0 * (1.0 - dph * dph) / (ph * ph);
}

double einstein_residual(const WarpedProfile& p, int samples) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double r = p.length * (i + 0.5) / samples;
        double av = p.a.f(r), da = p.a.d1(r), dda = p.a.d2(r);
        double bv = p.b.f(r), db = p.b.d1(r), ddb = p.b.d2(r);
        double ric_rr = -2.0 * dda / av - ddb / bv;
        double ric_aa = -dda / av - (da / av) * (da / av) - da * db / (av * bv) + 4.0 / (av * av) -
                        2.0 * bv * bv / (av * av * av * av);
        double ric_bb = -ddb / bv - 2.0 * da * db / (av * bv) + 2.0 * bv * bv / (av * av * av * av);
        worst = std::max({worst, std::abs(ric_rr - 3.0), std::abs(ric_aa - 3.0),
                          std::abs(ric_bb - 3.0)});
    }
    return worst;
}

IntegralResult volume_integral(const WarpedProfile& p) {
    auto f = [&](double r) { return p.J(r); };
    IntegralResult res =
        integrate_with_endpoint_subtraction(f, 0.0, p.length, p.series_switch_radius());
    res.value *= 2.0 * kPi * kPi;
    res.error_estimate *= 2.0 * kPi * kPi;
    for (auto& row : res.refinement_table) row.value *= 2.0 * kPi * kPi;
    return res;
}

double volume(const WarpedProfile& p) { return volume_integral(p).value; }

}  // namespace greenmass
