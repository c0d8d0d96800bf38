#include "greenmass/audits.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "greenmass/profiles.hpp"

namespace greenmass {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::domain_error("Rational: division by zero");
    return Rational(num * o.den, den * o.num);
}

namespace {

double gap_impl(double x) {
    double t = 1.0 - x;
    return t + 5.0 * t * t / x;
}

AuditEntry make_entry(std::string name, std::string statement,
                      std::map<std::string, double> inputs, double lhs, double rhs, double margin,
                      double tol) {
    AuditEntry e;
    e.name = std::move(name);
    e.statement = std::move(statement);
    e.inputs = std::move(inputs);
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = margin;
    e.tolerance = tol;
    e.verdict = (margin >= -tol) ? Verdict::holds : Verdict::fails;
    return e;
}

}  // namespace

double gap_function(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::domain_error("gap_function: theta outside (0, 1]");
    return gap_impl(theta);
}

Rational gap_function_rational(const Rational& theta) {
    if (!(theta.num > 0)) throw std::domain_error("gap_function_rational: theta <= 0");
    Rational one(1), five(5);
    Rational t = one - theta;
    return t + five * t * t / theta;
}

double topological_bound(double chi, double tau) {
    double h = chi + 1.5 * tau;
    if (!(h > 0.0)) throw std::domain_error("topological_bound: h = chi + 3 tau/2 must be > 0");
    return gap_impl(h / 6.0);
}

Rational topological_bound_rational(long long chi, long long tau) {
    Rational h = Rational(chi) + Rational(3) * Rational(tau) / Rational(2);
    if (!(h.num > 0)) throw std::domain_error("topological_bound_rational: h must be > 0");
    Rational x = h / Rational(6);
    Rational one(1), five(5);
    Rational t = one - x;
    return t + five * t * t / x;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "?";
}

bool AuditReport::all_ok() const {
    for (const auto& e : entries)
        if (e.verdict == Verdict::fails) return false;
    return true;
}

AuditEntry audit_bishop(double Vbar) {
    double bound = 8.0 * kPi * kPi / 3.0;
    return make_entry("bishop_volume", "Vbar <= 8 pi^2/3 (Bishop volume comparison)",
                      {{"Vbar", Vbar}}, Vbar, bound, bound - Vbar, 1e-8 * bound);
}

AuditEntry audit_thm2(double m, double Vbar) {
    double gap = 8.0 * kPi * kPi / 3.0 - Vbar;
    double lhs = 8.0 * kPi * kPi * m * Vbar;
    double rhs = 12.0 * gap * (2.0 * kPi * kPi / 3.0 + gap);
    double tol = 1e-6 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
    return make_entry("mass_gap", "8 pi^2 m Vbar >= 12 (8 pi^2/3 - Vbar)(2 pi^2/3 + (8 pi^2/3 - Vbar))",
                      {{"m", m}, {"Vbar", Vbar}}, lhs, rhs, lhs - rhs, tol);
}

AuditEntry audit_min_g(double m, double minG) {
    double rhs = 4.0 * minG - 1.0;
    AuditEntry e = make_entry("min_green_bound", "m >= 4 min G - 1 (hypothesis m > 3)",
                              {{"m", m}, {"minG", minG}}, m, rhs, m - rhs, 1e-9);
    if (!(m > 3.0)) e.verdict = Verdict::not_applicable;
    return e;
}

std::pair<AuditEntry, AuditEntry> audit_diameter(double m, double minG, double diam) {
    double q1 = 4.0 * minG - 1.0;
    double rhs1 = (q1 > 0.0) ? 2.0 * std::atan(1.0 / std::sqrt(q1)) : kPi;
    AuditEntry e1 = make_entry("diameter_min_green", "diam >= 2 arctan(1/sqrt(4 min G - 1))",
                               {{"m", m}, {"minG", minG}, {"diam", diam}}, diam, rhs1, diam - rhs1,
                               1e-9);
    double rhs2 = (m > 0.0) ? 2.0 * std::atan(1.0 / std::sqrt(m)) : kPi;
    AuditEntry e2 = make_entry("diameter_mass", "diam >= 2 arctan(1/sqrt(m))",
                               {{"m", m}, {"diam", diam}}, diam, rhs2, diam - rhs2, 1e-9);
    if (!(m > 3.0)) {
        e1.verdict = Verdict::not_applicable;
        e2.verdict = Verdict::not_applicable;
    }
    return {e1, e2};
}

AuditEntry audit_theorem1(double mass_series, double Vbar, double I_hess, double I_F) {
    double lhs = 16.0 * kPi * kPi * mass_series;
    double rhs = 6.0 * (8.0 * kPi * kPi / 3.0 - Vbar) + I_hess + I_F;
    double tol = 1e-3 * 16.0 * kPi * kPi;
    return make_entry("mass_volume_identity",
                      "16 pi^2 m = 6 (8 pi^2/3 - Vbar) + I_hess + I_F",
                      {{"m", mass_series}, {"Vbar", Vbar}, {"I_hess", I_hess}, {"I_F", I_F}}, lhs,
                      rhs, -std::abs(lhs - rhs), tol);
}

AuditEntry audit_dF_bound(double I_F, double m, double Vbar) {
    double rhs = 48.0 / 5.0 * kPi * kPi * m - 18.0 / 5.0 * (8.0 * kPi * kPi / 3.0 - Vbar);
    double tol = 1e-3 * 16.0 * kPi * kPi;
    return make_entry("gradient_energy_bound",
                      "I_F <= (48/5) pi^2 m - (18/5)(8 pi^2/3 - Vbar)",
                      {{"I_F", I_F}, {"m", m}, {"Vbar", Vbar}}, I_F, rhs, rhs - I_F, tol);
}

AuditEntry audit_cauchy_schwarz(double Irho, double I_F, double Vbar) {
    double rhs = std::sqrt(I_F * 2.0 * Vbar);
    return make_entry("cauchy_schwarz_chain", "I_rho <= sqrt(I_F * 2 Vbar)",
                      {{"I_rho", Irho}, {"I_F", I_F}, {"Vbar", Vbar}}, Irho, rhs, rhs - Irho,
                      1e-8);
}

AuditEntry audit_positive_mass(double m) {
    return make_entry("positive_mass", "m >= 0 (positive mass, Einstein-certified input)",
                      {{"m", m}}, m, 0.0, m, 1e-6);
}

}  // namespace greenmass
