#include "greenmass/mass.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace greenmass {

namespace {

struct ChartData {
    const WarpedProfile* p;
    const GreenSolution* s;
    Series corr_series{0};  // antiderivative of 1/phi - 1/r, valid below sw
    double sw = 0.0;
    double corr_at_sw = 0.0;

    double corrector(double r) const {
        if (r <= sw) return corr_series.eval(r);
        auto f = [this](double x) { return (x - p->a.f(x)) / (x * p->a.f(x)); };
        QuadratureOptions opt;
        opt.abs_tol = 1e-13;
        opt.rel_tol = 1e-13;
        opt.n_start = 32;
        return corr_at_sw + integrate_refined(f, sw, r, {}, opt).value;
    }
    double s_of(double r) const { return std::exp(-corrector(r)) / r; }
    double U_of(double r) const { return s->eval_G(r) * p->a.f(r) / s_of(r); }
    double r_of_s(double target) const {
        double r = 1.0 / target;
        for (int it = 0; it < 60; ++it) {
            double sv = s_of(r);
            double step = (sv - target) * p->a.f(r) / sv;  // ds/dr = -s/phi
            r += step;
            if (std::abs(step) < 1e-15 * r) break;
        }
        return r;
    }
};

}  // namespace

FlatChart flat_chart(const WarpedProfile& p, const GreenSolution& s) {
    if (p.kind != CrossSection::Round)
        throw std::domain_error("flat_chart: round cross-sections (Kind A) only");

    auto data = std::make_shared<ChartData>();
    data->p = &s.profile;
    data->s = &s;
    data->sw = p.series_switch_radius();

    // 1/phi - 1/r = (1 - Phi)/(r Phi) with phi = r Phi; series antiderivative
    Series phi = p.a_pole;
    Series Phi = phi.shift_down(1);
    Series one = Series::constant(1.0, Phi.order());
    Series integrand = (one - Phi).shift_down(1) / Phi;
    data->corr_series = integrand.antiderivative();
    data->corr_at_sw = data->corr_series.eval(data->sw);

    FlatChart chart;
    chart.c3 = p.a_pole[3];
    chart.s_at_r = [data](double r) { return data->s_of(r); };
    chart.U_at_s = [data](double sv) { return data->U_of(data->r_of_s(sv)); };
    chart.dU_ds = [data](double sv) {
        double r = data->r_of_s(sv);
        double G = data->s->eval_G(r), dG = data->s->eval_dG(r);
        double ph = data->p->a.f(r), dph = data->p->a.d1(r);
        double U = G * ph / sv;
        // U'/U = G'/G + phi'/phi + 1/phi, then dU/ds = U'(r) dr/ds = -phi U'/s
        double dU_dr = U * (dG / G + dph / ph + 1.0 / ph);
        return -ph * dU_dr / sv;
    };
    return chart;
}

FlatChart synthetic_chart(std::function<double(double)> U_of_s,
                          std::function<double(double)> dU_of_s, double c3) {
    FlatChart chart;
    chart.c3 = c3;
    chart.U_at_s = std::move(U_of_s);
    chart.dU_ds = std::move(dU_of_s);
    return chart;
}

double raw_coordinate_flux(const FlatChart& chart, double rho) {
    // g_ij = U^2 delta_ij, sum_j (d_i g_ij - d_j g_ii) nu_j = -3 (U^2)'(rho),
    // surface area omega3 rho^3 cancels the 1/omega3 prefactor
    return -6.0 * rho * rho * rho * chart.U_at_s(rho) * chart.dU_ds(rho);
}

FluxRoute mass_flux(const WarpedProfile& p, const GreenSolution& s, const FlatChart& chart,
                    double rho1, double tol) {
    if (p.kind != CrossSection::Round)
        throw std::domain_error("mass_flux: round cross-sections (Kind A) only");
    FluxRoute out;
    out.log_obstructed = std::abs(s.kappa) > s.options.kappa_tol;

    double f1 = raw_coordinate_flux(chart, rho1);
    double f2 = raw_coordinate_flux(chart, 2.0 * rho1);
    double f4 = raw_coordinate_flux(chart, 4.0 * rho1);
    out.samples = {{rho1, f1}, {2.0 * rho1, f2}, {4.0 * rho1, f4}};

    // raw(rho) = R + e2 rho^-2 + O(rho^-4) when the expansion is log-free
    double R1 = (4.0 * f2 - f1) / 3.0;
    double R1b = (4.0 * f4 - f2) / 3.0;
    out.spread = std::abs(R1 - R1b);
    out.raw = (16.0 * R1b - R1) / 15.0;
    if (!out.log_obstructed && out.spread > tol * std::max(1.0, std::abs(out.raw)))
        throw std::domain_error("mass_flux: extrapolation inconsistent by " +
                                std::to_string(out.spread));
    out.chart_offset = -6.0 * chart.c3 - 1.0;
    out.mass = out.raw + out.chart_offset;
    return out;
}

double mass_identity(const WarpedProfile& p, const GreenSolution& s, const BlowupFields& f) {
    if (!p.einstein_certified)
        throw std::domain_error("mass_identity: requires an Einstein-certified profile");
    if (std::abs(s.kappa) > s.options.kappa_tol)
        throw std::domain_error("mass_identity: log branch live");
    double Vbar = volume(p);
    double I_hess = integral_hess(f).value;
    double I_F = integral_gradF(f).value;
    return (6.0 * (8.0 * kPi * kPi / 3.0 - Vbar) + I_hess + I_F) / (16.0 * kPi * kPi);
}

MassReport build_mass_report(const WarpedProfile& p, const GreenSolution& s,
                             const BlowupFields& f, double rho1, bool want_flux) {
    MassReport rep;
    bool kappa_zero = std::abs(s.kappa) <= s.options.kappa_tol;
    if (!kappa_zero) rep.flags.push_back("log_obstructed_expansion");

    rep.series = s.mass_series;
    if (rep.series && !p.einstein_certified) rep.flags.push_back("outside_einstein_hypotheses");

    if (p.einstein_certified && kappa_zero) rep.identity = mass_identity(p, s, f);
    if (kappa_zero) rep.f_asymptote = f_asymptote_mass(f);
    if (want_flux && p.kind == CrossSection::Round) {
        FlatChart chart = flat_chart(p, s);
        FluxRoute route = mass_flux(p, s, chart, rho1);
        rep.flux = route.mass;
        rep.flux_detail = route;
        if (route.log_obstructed) rep.flags.push_back("flux_log_obstructed");
    }

    double spread = 0.0;
    std::vector<double> defined;
    for (const auto& v : {rep.series, rep.identity, rep.f_asymptote, rep.flux})
        if (v) defined.push_back(*v);
    for (std::size_t i = 0; i < defined.size(); ++i)
        for (std::size_t j = i + 1; j < defined.size(); ++j)
            spread = std::max(spread, std::abs(defined[i] - defined[j]));
    rep.route_spread = spread;
    return rep;
}

}  // namespace greenmass
