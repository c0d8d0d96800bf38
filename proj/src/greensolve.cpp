#include "greenmass/greensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greenmass {

namespace {

double cond_2x2(double a, double b, double c, double d) {
    double det = std::abs(a * d - b * c);
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    double t = a * a + b * b + c * c + d * d;
    double smax2 = 0.5 * (t + std::sqrt(std::max(t * t - 4.0 * det * det, 0.0)));
    return smax2 / det;
}

GreenSolution solve_impl(const WarpedProfile& p, const SolveOptions& opt);

}  // namespace

GreenSolution solve_green(const WarpedProfile& p, const SolveOptions& opt) {
    GreenSolution sol = solve_impl(p, opt);
    if (opt.estimate_convergence && opt.n >= 64) {
        SolveOptions half = opt;
        half.n = opt.n / 2;
        half.estimate_convergence = false;
        GreenSolution coarse = solve_impl(p, half);
        sol.convergence_estimate = std::abs(sol.A - coarse.A);
    }
    return sol;
}

namespace {

GreenSolution solve_impl(const WarpedProfile& p, const SolveOptions& opt) {
    const double L = p.length;
    GreenSolution sol;
    sol.profile = p;
    sol.options = opt;
    sol.pole = pole_basis(p, opt.order);
    sol.far = far_basis(p, opt.order);
    sol.kappa = sol.pole.kappa;

    if (std::abs(sol.kappa) > opt.kappa_tol && !opt.allow_log_branch)
        throw SolveError("solve_green: log branch required (kappa = " +
                         std::to_string(sol.kappa) + ") but not requested");

    sol.r0 = opt.r0_factor * L;
    sol.u0 = opt.u0_factor * L;
    sol.r_mid = opt.match_point_factor * L;
    if (!(sol.r0 < sol.r_mid && sol.r_mid < L - sol.u0))
        throw SolveError("solve_green: matching point outside (r0, L - u0)");

    const int n = opt.n;
    if (n < 8) throw SolveError("solve_green: n too small");
    const double dr = L / (n + 1);

    // series handoff zones for dense evaluation
    sol.switch_lo = p.series_switch_radius();
    while (sol.pole.truncation_estimate(sol.switch_lo) > 1e-12 && sol.switch_lo > 2.0 * sol.r0)
        sol.switch_lo *= 0.5;
    sol.switch_hi = p.series_switch_radius();
    while (sol.far.truncation_estimate(sol.switch_hi) > 1e-12 && sol.switch_hi > 2.0 * sol.u0)
        sol.switch_hi *= 0.5;

    // target node lists
    std::vector<double> left_nodes, right_nodes;
    for (int i = 1; i <= n; ++i) {
        double ri = i * dr;
        if (ri > sol.r0 && ri < sol.r_mid - 0.25 * dr) left_nodes.push_back(ri);
    }
    left_nodes.push_back(sol.r_mid);
    for (int i = n; i >= 1; --i) {
        double ri = i * dr;
        if (ri < L - sol.u0 && ri > sol.r_mid + 0.25 * dr) right_nodes.push_back(ri);
    }
    right_nodes.push_back(sol.r_mid);

    auto q = [&p](double r) { return p.rbar(r) / 6.0; };
    LinearOde2 plain{q, [&p](double r) { return -p.dlogJ(r); }};
    // scaled pole variable h = r^2 u1:  h'' = (1/r - P) h' + (2P/r + q) h
    LinearOde2 scaled{[&p, q](double r) { return 2.0 * p.dlogJ_reduced_over_r(r) + q(r); },
                      [&p](double r) { return 1.0 / r - p.dlogJ_reduced(r); }};

    OdeOptions oopt;
    oopt.tol = opt.fixed_step ? 0.0 : opt.integrator_tolerance;
    oopt.singular_lo = 0.0;
    oopt.singular_hi = L;
    oopt.max_step = dr;

    // u1 outward in the scaled variable, started series-directly
    double h0 = sol.pole.scaled_h(sol.r0);
    double dh0 = sol.pole.scaled_dh(sol.r0);
    auto h_traj = integrate_to_nodes(scaled, sol.r0, h0, dh0, left_nodes, oopt);
    // u2 outward, plain variable
    auto u2_traj = integrate_to_nodes(plain, sol.r0, sol.pole.u2(sol.r0), sol.pole.du2(sol.r0),
                                      left_nodes, oopt);
    // far-regular solution inward
    auto w_traj = integrate_to_nodes(plain, L - sol.u0, sol.far.v(sol.u0), -sol.far.dv(sol.u0),
                                     right_nodes, oopt);

    auto u1_of = [](const OdeState& s) { return s.y / (s.r * s.r); };
    auto du1_of = [](const OdeState& s) {
        return s.dy / (s.r * s.r) - 2.0 * s.y / (s.r * s.r * s.r);
    };

    // match w = c1 u1 + c2 u2 at r_mid (value and derivative)
    const OdeState& m1 = h_traj.back();
    const OdeState& m2 = u2_traj.back();
    const OdeState& mw = w_traj.back();
    double u1m = u1_of(m1), du1m = du1_of(m1);
    double u2m = m2.y, du2m = m2.dy;
    double wm = mw.y, dwm = mw.dy;

    double det = u1m * du2m - u2m * du1m;
    sol.match_condition = cond_2x2(u1m, u2m, du1m, du2m);
    if (!(std::abs(det) > 0.0) || sol.match_condition > opt.cond_threshold)
        throw SolveError("solve_green: matching matrix ill-conditioned (cond = " +
                         std::to_string(sol.match_condition) + ")");
    double c1 = (wm * du2m - u2m * dwm) / det;
    double c2 = (u1m * dwm - wm * du1m) / det;
    if (!(c1 > 0.0)) throw SolveError("solve_green: nonpositive pole coefficient, G > 0 fails");
    sol.c1 = c1;
    sol.A = c2 / c1;
    if (std::abs(sol.kappa) <= opt.kappa_tol) sol.mass_series = 12.0 * sol.A - 1.0;

    // Abel invariant: (u1 u2' - u2 u1') J = 2 for every r
    for (std::size_t i = 0; i < h_traj.size(); ++i) {
        double u1v = u1_of(h_traj[i]), du1v = du1_of(h_traj[i]);
        double w2 = (u1v * u2_traj[i].dy - u2_traj[i].y * du1v) * p.J(h_traj[i].r) / 2.0;
        sol.wronskian_drift = std::max(sol.wronskian_drift, std::abs(w2 - 1.0));
    }

    // dense mesh: left branch carries u1 + A u2, right branch carries w / c1;
    // the scaled values h = r^2 G are assembled cancellation-free from the
    // trajectories themselves
    sol.mesh_r.reserve(left_nodes.size() + right_nodes.size());
    auto push_node = [&](double r, double g, double dg, double hv, double dhv) {
        sol.mesh_r.push_back(r);
        sol.mesh_G.push_back(g);
        sol.mesh_dG.push_back(dg);
        sol.mesh_h.push_back(hv);
        sol.mesh_dh.push_back(dhv);
    };
    {
        double r = sol.r0;
        double u2v = sol.pole.u2(r), du2v = sol.pole.du2(r);
        push_node(r, sol.pole.u1(r) + sol.A * u2v, sol.pole.du1(r) + sol.A * du2v,
                  sol.pole.scaled_h(r) + sol.A * r * r * u2v,
                  sol.pole.scaled_dh(r) + sol.A * (r * r * du2v + 2.0 * r * u2v));
    }
    for (std::size_t i = 0; i < h_traj.size(); ++i) {
        double r = h_traj[i].r;
        double u1v = u1_of(h_traj[i]), du1v = du1_of(h_traj[i]);
        double u2v = u2_traj[i].y, du2v = u2_traj[i].dy;
        push_node(r, u1v + sol.A * u2v, du1v + sol.A * du2v,
                  h_traj[i].y + sol.A * r * r * u2v,
                  h_traj[i].dy + sol.A * (r * r * du2v + 2.0 * r * u2v));
    }
    for (std::size_t i = w_traj.size(); i-- > 1;) {  // skip r_mid duplicate
        double r = w_traj[i - 1].r;
        double wv = w_traj[i - 1].y, dwv = w_traj[i - 1].dy;
        push_node(r, wv / c1, dwv / c1, r * r * wv / c1, (r * r * dwv + 2.0 * r * wv) / c1);
    }
    {
        double r = L - sol.u0;
        double wv = sol.far.v(sol.u0), dwv = -sol.far.dv(sol.u0);
        push_node(r, wv / c1, dwv / c1, r * r * wv / c1, (r * r * dwv + 2.0 * r * wv) / c1);
    }
    // drop any duplicate produced when L-u0 coincides with a grid node
    for (std::size_t i = 1; i < sol.mesh_r.size();) {
        if (sol.mesh_r[i] <= sol.mesh_r[i - 1] + 1e-15 * L) {
            sol.mesh_r.erase(sol.mesh_r.begin() + i);
            sol.mesh_G.erase(sol.mesh_G.begin() + i);
            sol.mesh_dG.erase(sol.mesh_dG.begin() + i);
            sol.mesh_h.erase(sol.mesh_h.begin() + i);
            sol.mesh_dh.erase(sol.mesh_dh.begin() + i);
        } else {
            ++i;
        }
    }

    // report grid: trajectory values wherever the mesh covers the node, the
    // endpoint series elsewhere (one consistent representation per node keeps
    // the finite-difference defect below the handoff mismatch)
    sol.r.resize(n);
    sol.G.resize(n);
    sol.dG.resize(n);
    for (int i = 0; i < n; ++i) {
        double ri = (i + 1) * dr;
        sol.r[i] = ri;
        auto it = std::lower_bound(sol.mesh_r.begin(), sol.mesh_r.end(), ri - 1e-9 * dr);
        if (it != sol.mesh_r.end() && std::abs(*it - ri) < 1e-9 * dr) {
            std::size_t k = static_cast<std::size_t>(it - sol.mesh_r.begin());
            sol.G[i] = sol.mesh_G[k];
            sol.dG[i] = sol.mesh_dG[k];
        } else {
            sol.G[i] = sol.eval_G(ri);
            sol.dG[i] = sol.eval_dG(ri);
        }
        if (!(sol.G[i] > 0.0))
            throw SolveError("solve_green: computed G not positive on the grid");
    }

    // independent ODE defect through h = r^2 G: res_G * r^2 = res_h, and the
    // natural scale max(|G|, r^-2) becomes max(|h|, 1). The stencil stride
    // keeps the effective step near L/1024: rounding noise in the second
    // difference grows like (stride dr)^-2, so stride-1 stencils go noise-
    // limited on fine grids. With a live log branch h carries kappa r^2 log r
    // whose sixth derivative ~ r^-4 defeats the stencil near the pole, so the
    // scan starts above the series zone there.
    if (n >= 8) {
        std::vector<double> hh(n), dh(n);
        for (int i = 0; i < n; ++i) {
            hh[i] = sol.r[i] * sol.r[i] * sol.G[i];
            dh[i] = sol.r[i] * sol.r[i] * sol.dG[i] + 2.0 * sol.r[i] * sol.G[i];
        }
        const int k = std::max(1, n / 1024);
        const double step = k * dr;
        int first = 2 * k;
        if (std::abs(sol.kappa) > opt.kappa_tol)
            while (first < n - 2 * k && sol.r[first] < sol.switch_lo) ++first;
        for (int i = first; i < n - 2 * k; ++i) {
            double d2 = (-hh[i - 2 * k] + 16.0 * hh[i - k] - 30.0 * hh[i] + 16.0 * hh[i + k] -
                         hh[i + 2 * k]) /
                        (12.0 * step * step);
            double ri = sol.r[i];
            double res = d2 - (1.0 / ri - p.dlogJ_reduced(ri)) * dh[i] -
                         (2.0 * p.dlogJ_reduced_over_r(ri) + q(ri)) * hh[i];
            double scaled = std::abs(res) / std::max(std::abs(hh[i]), 1.0);
            sol.defect_max = std::max(sol.defect_max, scaled);
            if (ri < 2.0 * sol.switch_lo)
                sol.defect_near_pole = std::max(sol.defect_near_pole, scaled);
            if (L - ri < 2.0 * sol.switch_hi)
                sol.defect_near_far = std::max(sol.defect_near_far, scaled);
        }
    }
    return sol;
}

}  // namespace

namespace {

// second derivative of h = r^2 G from its own ODE
double scaled_second(const WarpedProfile& p, double r, double h, double dh) {
    double P = p.dlogJ_reduced(r);
    return (1.0 / r - P) * dh + (2.0 * p.dlogJ_reduced_over_r(r) + p.rbar(r) / 6.0) * h;
}

}  // namespace

HermiteQuintic GreenSolution::scaled_segment(double at) const {
    auto it = std::upper_bound(mesh_r.begin(), mesh_r.end(), at);
    std::size_t j = static_cast<std::size_t>(it - mesh_r.begin());
    if (j == 0) j = 1;
    if (j >= mesh_r.size()) j = mesh_r.size() - 1;
    std::size_t i = j - 1;
    return HermiteQuintic{mesh_r[i],
                          mesh_r[j],
                          mesh_h[i],
                          mesh_dh[i],
                          scaled_second(profile, mesh_r[i], mesh_h[i], mesh_dh[i]),
                          mesh_h[j],
                          mesh_dh[j],
                          scaled_second(profile, mesh_r[j], mesh_h[j], mesh_dh[j])};
}

double GreenSolution::eval_G(double at) const {
    const double L = profile.length;
    if (at <= switch_lo) return pole.u1(at) + A * pole.u2(at);
    if (at >= L - switch_hi) return far.v(L - at) / c1;
    return scaled_segment(at).eval(at) / (at * at);
}

double GreenSolution::eval_dG(double at) const {
    const double L = profile.length;
    if (at <= switch_lo) return pole.du1(at) + A * pole.du2(at);
    if (at >= L - switch_hi) return -far.dv(L - at) / c1;
    HermiteQuintic hq = scaled_segment(at);
    double h = hq.eval(at);
    double dh = hq.eval_derivative(at);
    return (dh - 2.0 * h / at) / (at * at);
}

double GreenSolution::eval_ddG(double at) const {
    return -profile.dlogJ(at) * eval_dG(at) + profile.rbar(at) / 6.0 * eval_G(at);
}

double GreenSolution::min_G() const {
    double m = G_at_far();
    for (double g : G) m = std::min(m, g);
    return m;
}

double mass_from_expansion(const GreenSolution& s) {
    if (std::abs(s.kappa) > s.options.kappa_tol)
        throw std::domain_error("mass_from_expansion: undefined, |kappa| = " +
                                std::to_string(std::abs(s.kappa)) + " exceeds tolerance");
    return 12.0 * s.A - 1.0;
}

}  // namespace greenmass
