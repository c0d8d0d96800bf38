#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace greenmass {

// Exact fractions for the arithmetic gates.
struct Rational {
    long long num = 0;
    long long den = 1;
    Rational() = default;
    Rational(long long n, long long d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// f(x) = (1 - x) + 5 x^-1 (1 - x)^2, the mass-gap profile; strictly
// decreasing on (0, 1), f(1/3) = 22/3, f(1/4) = 12, f(1) = 0.
double gap_function(double theta);  // domain (0, 1]
Rational gap_function_rational(const Rational& theta);

// f(h/6) with h = chi + (3/2) tau; requires h > 0 (Hitchin-Thorpe).
double topological_bound(double chi, double tau);
Rational topological_bound_rational(long long chi, long long tau);

enum class Verdict { holds, fails, not_applicable };
const char* to_string(Verdict v);

struct AuditEntry {
    std::string name;
    std::string statement;  // human-readable inequality, classical theorem names
    std::map<std::string, double> inputs;
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0;  // signed; holds requires margin >= -tolerance
    double tolerance = 0.0;
    Verdict verdict = Verdict::holds;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    bool all_ok() const;
};

// Vbar <= 8 pi^2 / 3 (Bishop volume comparison)
AuditEntry audit_bishop(double Vbar);
// 8 pi^2 m Vbar >= 12 (8 pi^2/3 - Vbar) [2 pi^2/3 + (8 pi^2/3 - Vbar)]
AuditEntry audit_thm2(double m, double Vbar);
// m >= 4 min G - 1 under the hypothesis m > 3; not-applicable otherwise
AuditEntry audit_min_g(double m, double minG);
// diam >= 2 arctan(1/sqrt(4 minG - 1)) and diam >= 2 arctan(1/sqrt(m)),
// both under m > 3; reported informationally otherwise
std::pair<AuditEntry, AuditEntry> audit_diameter(double m, double minG, double diam);
// |16 pi^2 m - 6 (8 pi^2/3 - Vbar) - I_hess - I_F| < 1e-3 * 16 pi^2
AuditEntry audit_theorem1(double mass_series, double Vbar, double I_hess, double I_F);
// I_F <= (48/5) pi^2 m - (18/5)(8 pi^2/3 - Vbar) + tol
AuditEntry audit_dF_bound(double I_F, double m, double Vbar);
// I_rho <= sqrt(I_F * 2 Vbar) + 1e-8 (Cauchy-Schwarz step of the mass gap)
AuditEntry audit_cauchy_schwarz(double Irho, double I_F, double Vbar);
// m >= -tol on Einstein-certified inputs (positive mass)
AuditEntry audit_positive_mass(double m);

}  // namespace greenmass
