#include "greenmass/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace greenmass {

namespace {

struct Deriv {
    double dy, ddy;
};

inline Deriv rhs(const LinearOde2& ode, double r, double y, double dy) {
    return {dy, ode.c1(r) * dy + ode.c0(r) * y};
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

struct StepResult {
    double y, dy;
    double err;  // scaled error norm
};

StepResult dopri5_step(const LinearOde2& ode, double r, double y, double dy, double h) {
    Deriv k1 = rhs(ode, r, y, dy);
    Deriv k2 = rhs(ode, r + C2 * h, y + h * A21 * k1.dy, dy + h * A21 * k1.ddy);
    Deriv k3 = rhs(ode, r + C3 * h, y + h * (A31 * k1.dy + A32 * k2.dy),
                   dy + h * (A31 * k1.ddy + A32 * k2.ddy));
    Deriv k4 = rhs(ode, r + C4 * h, y + h * (A41 * k1.dy + A42 * k2.dy + A43 * k3.dy),
                   dy + h * (A41 * k1.ddy + A42 * k2.ddy + A43 * k3.ddy));
    Deriv k5 = rhs(ode, r + C5 * h,
                   y + h * (A51 * k1.dy + A52 * k2.dy + A53 * k3.dy + A54 * k4.dy),
                   dy + h * (A51 * k1.ddy + A52 * k2.ddy + A53 * k3.ddy + A54 * k4.ddy));
    Deriv k6 = rhs(ode, r + h,
                   y + h * (A61 * k1.dy + A62 * k2.dy + A63 * k3.dy + A64 * k4.dy + A65 * k5.dy),
                   dy + h * (A61 * k1.ddy + A62 * k2.ddy + A63 * k3.ddy + A64 * k4.ddy +
                             A65 * k5.ddy));

    double ynew = y + h * (B1 * k1.dy + B3 * k3.dy + B4 * k4.dy + B5 * k5.dy + B6 * k6.dy);
    double dynew = dy + h * (B1 * k1.ddy + B3 * k3.ddy + B4 * k4.ddy + B5 * k5.ddy + B6 * k6.ddy);

    Deriv k7 = rhs(ode, r + h, ynew, dynew);
    double ey = h * (E1 * k1.dy + E3 * k3.dy + E4 * k4.dy + E5 * k5.dy + E6 * k6.dy + E7 * k7.dy);
    double edy =
        h * (E1 * k1.ddy + E3 * k3.ddy + E4 * k4.ddy + E5 * k5.ddy + E6 * k6.ddy + E7 * k7.ddy);

    double sy = 1.0 + std::max(std::abs(y), std::abs(ynew));
    double sdy = 1.0 + std::max(std::abs(dy), std::abs(dynew));
    double err = std::max(std::abs(ey) / sy, std::abs(edy) / sdy);
    return {ynew, dynew, err};
}

}  // namespace

std::vector<OdeState> integrate_to_nodes(const LinearOde2& ode, double r0, double y0, double dy0,
                                         std::span<const double> targets, const OdeOptions& opt) {
    std::vector<OdeState> out;
    out.reserve(targets.size());

    double r = r0, y = y0, dy = dy0;
    std::size_t steps = 0;

    auto policy_cap = [&](double at) {
        double cap = std::numeric_limits<double>::infinity();
        if (opt.max_step > 0.0) cap = opt.max_step;
        double d_lo = at - opt.singular_lo;
        double d_hi = opt.singular_hi - at;
        double d = std::min(std::abs(d_lo), std::abs(d_hi));
        cap = std::min(cap, std::max(opt.max_step_frac * d, 1e-14));
        return cap;
    };

    for (double target : targets) {
        double dir = (target >= r) ? 1.0 : -1.0;
        while ((target - r) * dir > 0.0) {
            if (++steps > opt.max_steps) throw SolveError("ode: step budget exhausted");
            double h = std::min(std::abs(target - r), policy_cap(r)) * dir;
            StepResult st = dopri5_step(ode, r, y, dy, h);
            if (opt.tol > 0.0) {
                int halvings = 0;
                while (st.err > opt.tol && halvings < 40) {
                    h *= 0.5;
                    ++halvings;
                    if (++steps > opt.max_steps) throw SolveError("ode: step budget exhausted");
                    st = dopri5_step(ode, r, y, dy, h);
                }
                if (st.err > opt.tol)
                    throw SolveError("ode: integrator tolerance not met (local error " +
                                     std::to_string(st.err) + ")");
            }
            r += h;
            y = st.y;
            dy = st.dy;
        }
        r = target;  // suppress drift
        out.push_back({r, y, dy});
    }
    return out;
}

double HermiteQuintic::eval(double x) const {
    double h = x1 - x0;
    double t = (x - x0) / h;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    double K0 = 10 * t3 - 15 * t4 + 6 * t5;
    double K1 = -4 * t3 + 7 * t4 - 3 * t5;
    double K2 = 0.5 * t3 - t4 + 0.5 * t5;
    return y0 * H0 + h * d0 * H1 + h * h * s0 * H2 + y1 * K0 + h * d1 * K1 + h * h * s1 * K2;
}

double HermiteQuintic::eval_derivative(double x) const {
    double h = x1 - x0;
    double t = (x - x0) / h;
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    double dK0 = 30 * t2 - 60 * t3 + 30 * t4;
    double dK1 = -12 * t2 + 28 * t3 - 15 * t4;
    double dK2 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    return (y0 * dH0 + h * d0 * dH1 + h * h * s0 * dH2 + y1 * dK0 + h * d1 * dK1 +
            h * h * s1 * dK2) /
           h;
}

}  // namespace greenmass
