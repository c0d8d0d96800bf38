#include "greenmass/frobenius.hpp"

#include <cmath>
#include <stdexcept>

namespace greenmass {

namespace {

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

double horner_derivative(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + c[k] * static_cast<double>(k);
    return acc;
}

double horner_second(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 2;)
        acc = acc * x + c[k] * static_cast<double>(k) * static_cast<double>(k - 1);
    return acc;
}

double tail_estimate(const std::vector<double>& c, double x) {
    if (c.size() < 2) return 0.0;
    std::size_t n = c.size() - 1;
    return std::abs(c[n]) * std::pow(x, static_cast<double>(n)) +
           std::abs(c[n - 1]) * std::pow(x, static_cast<double>(n - 1));
}

}  // namespace

std::vector<double> frobenius_branch(const Series& P, const Series& q, double mu, int s,
                                     std::size_t order, double* kappa) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = 1.0;
    if (kappa) *kappa = 0.0;

    std::vector<double> q_branch;  // regular branch, needed for the log source

    auto Pc = [&](long k) { return (k >= 0 && k <= static_cast<long>(P.order())) ? P[k] : 0.0; };
    auto qc = [&](long k) { return (k >= 0 && k <= static_cast<long>(q.order())) ? q[k] : 0.0; };

    double kap = 0.0;
    for (std::size_t k = 1; k <= order; ++k) {
        double e = static_cast<double>(k) + s;
        double I = e * (e - 1.0) + mu * e;
        double S = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double Pi = Pc(static_cast<long>(k - 1 - j));
            double qi = qc(static_cast<long>(k) - 2 - static_cast<long>(j));
            S += c[j] * (Pi * (static_cast<double>(j) + s) - qi);
        }
        if (kap != 0.0) {
            // L(u2 log x) contributes [2(k+s) + mu - 1] q_{k+s} + sum P_i q_{k+s-1-i}
            long m = static_cast<long>(k) + s;
            double ls = 0.0;
            if (m >= 0 && m < static_cast<long>(q_branch.size()))
                ls += (2.0 * e + mu - 1.0) * q_branch[m];
            for (long i = 1; i <= m - 1; ++i)
                if (m - 1 - i < static_cast<long>(q_branch.size()))
                    ls += Pc(i) * q_branch[m - 1 - i];
            S += kap * ls;
        }
        if (std::abs(I) < 1e-12) {
            // resonance: the obstruction feeds the log branch, convention c_k = 0
            q_branch = frobenius_branch(P, q, mu, 0, order, nullptr);
            kap = -S / (mu - 1.0);
            c[k] = 0.0;
        } else {
            c[k] = -S / I;
        }
    }
    if (kappa) *kappa = kap;
    return c;
}

Series density_series(const WarpedProfile& p, std::size_t order) {
    Series e(order);
    for (std::size_t k = 0; k <= order; ++k) e.at(k) = p.e_pole[k];
    return e;
}

PoleExpansion pole_basis(const WarpedProfile& p, std::size_t order) {
    const std::size_t work = order + 4;
    Series E = density_series(p, work);
    Series P = E.derivative() / E;  // J'/J - 3/r
    Series q(work);
    for (std::size_t k = 0; k <= work; ++k) q.at(k) = p.rbar_pole[k] / 6.0;

    PoleExpansion pe;
    pe.order = order;
    pe.radius_hint = 1e-3 * p.length;
    pe.q_coeffs = frobenius_branch(P, q, 3.0, 0, order, nullptr);
    pe.b_coeffs = frobenius_branch(P, q, 3.0, -2, order, &pe.kappa);
    if (pe.kappa == 0.0) pe.kappa = 0.0;  // normalize away -0.0
    return pe;
}

FarExpansion far_basis(const WarpedProfile& p, std::size_t order) {
    FarExpansion fe;
    fe.endpoint_class = p.endpoint_class();
    fe.order = order;
    fe.radius_hint = 1e-3 * p.length;

    const std::size_t work = order + 6;
    Series Jf = p.a_far * p.b_far;
    Jf = Jf * p.a_far;  // J(u) = a(L-u)^2 b(L-u)
    std::size_t mu = (fe.endpoint_class == EndpointClass::SmoothPoint) ? 3 : 1;
    Series Et = Jf.shift_down(mu, 1e-9);
    Series P = Et.derivative() / Et;
    Series q(work);
    for (std::size_t k = 0; k <= work && k <= p.rbar_far.order(); ++k)
        q.at(k) = p.rbar_far[k] / 6.0;

    fe.v_coeffs = frobenius_branch(P, q, static_cast<double>(mu), 0, order, nullptr);
    return fe;
}

double PoleExpansion::u1(double r) const {
    double v = horner(b_coeffs, r) / (r * r);
    if (kappa != 0.0) v += kappa * u2(r) * std::log(r);
    return v;
}

double PoleExpansion::du1(double r) const {
    double s = horner(b_coeffs, r);
    double ds = horner_derivative(b_coeffs, r);
    double v = ds / (r * r) - 2.0 * s / (r * r * r);
    if (kappa != 0.0) v += kappa * (u2(r) / r + std::log(r) * du2(r));
    return v;
}

double PoleExpansion::ddu1(double r) const {
    double s = horner(b_coeffs, r);
    double ds = horner_derivative(b_coeffs, r);
    double dds = horner_second(b_coeffs, r);
    double v = dds / (r * r) - 4.0 * ds / (r * r * r) + 6.0 * s / (r * r * r * r);
    if (kappa != 0.0)
        v += kappa * (std::log(r) * ddu2(r) + 2.0 * du2(r) / r - u2(r) / (r * r));
    return v;
}

double PoleExpansion::u2(double r) const { return horner(q_coeffs, r); }
double PoleExpansion::du2(double r) const { return horner_derivative(q_coeffs, r); }
double PoleExpansion::ddu2(double r) const { return horner_second(q_coeffs, r); }

double PoleExpansion::scaled_h(double r) const {
    double v = horner(b_coeffs, r);
    if (kappa != 0.0) v += kappa * r * r * std::log(r) * u2(r);
    return v;
}

double PoleExpansion::scaled_dh(double r) const {
    double v = horner_derivative(b_coeffs, r);
    if (kappa != 0.0)
        v += kappa * (2.0 * r * std::log(r) * u2(r) + r * u2(r) + r * r * std::log(r) * du2(r));
    return v;
}

double PoleExpansion::truncation_estimate(double r) const {
    return tail_estimate(b_coeffs, r) + tail_estimate(q_coeffs, r);
}

double FarExpansion::v(double u) const { return horner(v_coeffs, u); }
double FarExpansion::dv(double u) const { return horner_derivative(v_coeffs, u); }

double FarExpansion::truncation_estimate(double u) const { return tail_estimate(v_coeffs, u); }

}  // namespace greenmass
