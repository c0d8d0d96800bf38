#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greenmass/blowup.hpp"
#include "greenmass/quadrature.hpp"

namespace greenmass {

// Conformally flat representation g = U^2 (flat) of Kind-A blow-ups, with flat
// radial coordinate s(r) = (1/r) exp(-Int_0^r (1/phi - 1/rho) drho) and
// U = G phi / s -> 1 at the AF end. Synthetic charts (U given directly in s)
// plug into the same flux machinery.
struct FlatChart {
    double c3 = 0.0;  // phi'''(0)/6; zero for synthetic charts unless supplied
    std::function<double(double)> s_at_r;  // diagnostics; empty for synthetic charts
    std::function<double(double)> U_at_s;
    std::function<double(double)> dU_ds;
};

FlatChart flat_chart(const WarpedProfile& p, const GreenSolution& s);
FlatChart synthetic_chart(std::function<double(double)> U_of_s,
                          std::function<double(double)> dU_of_s, double c3 = 0.0);

// literal coordinate flux of g = U^2 delta over the sphere s = rho:
// (1/omega3) Oint sum (d_i g_ij - d_j g_ii) nu_j dS = -3 rho^3 d(U^2)/drho
double raw_coordinate_flux(const FlatChart& chart, double rho);

struct FluxRoute {
    double raw = 0.0;     // Richardson limit of the raw flux (-> 6 mu~)
    double spread = 0.0;  // disagreement of the two extrapolation levels
    double mass = 0.0;    // raw - 6 c3 - 1
    double flux_constant = 6.0;  // raw flux / mu~, pinned by the Schwarzschild oracle
    double chart_offset = 0.0;   // -6 c3 - 1
    std::vector<std::pair<double, double>> samples;  // (rho, raw flux)
    bool log_obstructed = false;
};

// Flux samples at rho1, 2 rho1, 4 rho1 with two-level Richardson in rho^-2.
// Throws on extrapolation inconsistency unless the log branch is live, in
// which case the estimate is returned flagged.
FluxRoute mass_flux(const WarpedProfile& p, const GreenSolution& s, const FlatChart& chart,
                    double rho1 = 100.0, double tol = 1e-4);

// [6 (8 pi^2/3 - Vbar) + I_hess + I_F] / (16 pi^2); Einstein-certified only
double mass_identity(const WarpedProfile& p, const GreenSolution& s, const BlowupFields& f);

struct MassReport {
    std::optional<double> series;       // 12 A - 1
    std::optional<double> identity;     // volume + Hessian + gradient route
    std::optional<double> f_asymptote;  // -lim F/r^2
    std::optional<double> flux;         // calibrated coordinate flux (Kind A)
    double route_spread = 0.0;          // max pairwise gap among defined routes
    std::vector<std::string> flags;
    std::optional<FluxRoute> flux_detail;
};

MassReport build_mass_report(const WarpedProfile& p, const GreenSolution& s,
                             const BlowupFields& f, double rho1 = 100.0,
                             bool want_flux = true);

}  // namespace greenmass
