#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenmass {

struct RefinementRow {
    std::size_t n;  // total panel count at this level
    double value;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int endpoint_subtraction_order = 0;
    std::vector<RefinementRow> refinement_table;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_estimate(achieved) {}
    double achieved_estimate;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t n_start = 64;    // panels at the first refinement level
    std::size_t n_max = 1 << 20; // refuse beyond this many panels
    std::size_t min_levels = 3;
};

// Composite Simpson with panel doubling over [lo, hi]; f must be finite on the
// closed interval. Panels are split across the supplied breakpoints so the
// integrand only needs to be smooth piecewise.
IntegralResult integrate_refined(const std::function<double(double)>& f, double lo, double hi,
                                 const std::vector<double>& breakpoints = {},
                                 QuadratureOptions opt = {});

// Leading odd endpoint behavior f ~ c1*t + c3*t^3 in the distance t to an endpoint.
struct EndpointModel {
    double c1 = 0.0;
    double c3 = 0.0;
    double width = 0.0;  // model applies on t in [0, width]
    double eval(double t) const { return c1 * t + c3 * t * t * t; }
    double integral() const { return 0.5 * c1 * width * width + 0.25 * c3 * width * width * width * width; }
};

// Fit c1, c3 from samples of f at t = h and t = h/2 away from the endpoint
// (at + dir*t). Assumes the local expansion c1*t + c3*t^3 + O(t^5).
EndpointModel fit_endpoint_model(const std::function<double(double)>& f, double at, double dir,
                                 double h, double width);

// Subtract the two-order endpoint models, integrate the remainder numerically
// in three segments (no kinks inside a segment), and add the model integrals
// back analytically. Rows of the refinement table include the analytic part.
IntegralResult integrate_with_endpoint_subtraction(const std::function<double(double)>& f,
                                                   double lo, double hi, double model_width,
                                                   QuadratureOptions opt = {});

}  // namespace greenmass
