#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenmass {

class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// y'' = c1(r) y' + c0(r) y
struct LinearOde2 {
    std::function<double(double)> c0;
    std::function<double(double)> c1;
};

struct OdeOptions {
    double tol = 1e-12;          // relative local-error target; <= 0 disables error control
    double max_step_frac = 0.1;  // step <= max_step_frac * distance to either singular end
    double max_step = 0.0;       // absolute cap; 0 = none
    double singular_lo = 0.0;    // ends of the domain where coefficients blow up
    double singular_hi = 0.0;
    std::size_t max_steps = 1u << 22;
};

struct OdeState {
    double r = 0.0, y = 0.0, dy = 0.0;
};

// Dormand-Prince 5(4) driver that lands exactly on every target node (targets
// must be strictly monotone starting from r0's side). Deterministic: the step
// policy depends only on position and the embedded error test uses fixed
// halving. Returns the state at each target.
std::vector<OdeState> integrate_to_nodes(const LinearOde2& ode, double r0, double y0, double dy0,
                                         std::span<const double> targets, const OdeOptions& opt);

// Quintic Hermite interpolation on [x0, x1] from value/slope/curvature data.
struct HermiteQuintic {
    double x0, x1;
    double y0, d0, s0;
    double y1, d1, s1;
    double eval(double x) const;
    double eval_derivative(double x) const;
};

}  // namespace greenmass
