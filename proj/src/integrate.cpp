#include "greenmass/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace greenmass {

namespace {

// Kahan-compensated accumulator; summation order is fixed by the loop, so
// results are bitwise reproducible.
struct Accum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double simpson_segment(const std::function<double(double)>& f, double lo, double hi,
                       std::size_t panels) {
    const double h = (hi - lo) / static_cast<double>(panels);
    Accum acc;
    acc.add(f(lo));
    acc.add(f(hi));
    for (std::size_t i = 0; i < panels; ++i) {
        double mid = lo + (static_cast<double>(i) + 0.5) * h;
        acc.add(4.0 * f(mid));
        if (i > 0) acc.add(2.0 * f(lo + static_cast<double>(i) * h));
    }
    return acc.sum * h / 6.0;
}

}  // namespace

IntegralResult integrate_refined(const std::function<double(double)>& f, double lo, double hi,
                                 const std::vector<double>& breakpoints, QuadratureOptions opt) {
    if (!(hi > lo)) throw QuadratureError("integrate_refined: empty interval", 0.0);

    std::vector<double> knots{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) knots.push_back(b);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());

    const double total_len = hi - lo;
    IntegralResult res;
    double prev = 0.0;
    bool have_prev = false;

    for (std::size_t n = opt.n_start; n <= opt.n_max; n *= 2) {
        Accum acc;
        std::size_t used = 0;
        for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
            double a = knots[s], b = knots[s + 1];
            auto panels = static_cast<std::size_t>(
                std::ceil(static_cast<double>(n) * (b - a) / total_len));
            panels = std::max<std::size_t>(panels, 4);
            used += panels;
            acc.add(simpson_segment(f, a, b, panels));
        }
        res.refinement_table.push_back({used, acc.sum});
        if (have_prev) {
            double delta = std::abs(acc.sum - prev);
            double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(acc.sum));
            if (delta <= tol && res.refinement_table.size() >= opt.min_levels) {
                res.value = acc.sum;
                res.error_estimate = std::max(delta, 1e-16 * std::abs(acc.sum));
                return res;
            }
        }
        prev = acc.sum;
        have_prev = true;
    }
    double last_delta = res.refinement_table.size() >= 2
                            ? std::abs(res.refinement_table.back().value -
                                       res.refinement_table[res.refinement_table.size() - 2].value)
                            : std::abs(prev);
    throw QuadratureError("integrate_refined: tolerance not reached at n_max", last_delta);
}

EndpointModel fit_endpoint_model(const std::function<double(double)>& f, double at, double dir,
                                 double h, double width) {
    // f(t)/t = c1 + c3 t^2 + O(t^4); Richardson over t = h, h/2.
    double g1 = f(at + dir * h) / h;
    double g2 = f(at + dir * (0.5 * h)) / (0.5 * h);
    EndpointModel m;
    m.c1 = (4.0 * g2 - g1) / 3.0;
    m.c3 = (g1 - g2) / (0.75 * h * h);
    m.width = width;
    // consistency probe at a third radius; fall back to no model if the local
    // expansion is not odd-dominated
    double g3 = f(at + dir * (0.25 * h)) / (0.25 * h);
    double predicted = m.c1 + m.c3 * (0.25 * h) * (0.25 * h);
    double scale = std::max({std::abs(g1), std::abs(g2), std::abs(g3), 1e-30});
    if (std::abs(g3 - predicted) > 1e-3 * scale) {
        m.c1 = 0.0;
        m.c3 = 0.0;
    }
    return m;
}

IntegralResult integrate_with_endpoint_subtraction(const std::function<double(double)>& f,
                                                   double lo, double hi, double model_width,
                                                   QuadratureOptions opt) {
    const double len = hi - lo;
    double w = std::min(model_width, 0.25 * len);
    EndpointModel mlo = fit_endpoint_model(f, lo, +1.0, w / 8.0, w);
    EndpointModel mhi = fit_endpoint_model(f, hi, -1.0, w / 8.0, w);

    // three segments with their own integrands: the subtracted remainders
    // vanish to fifth order at the outer endpoints, the middle is untouched
    auto g_lo = [&](double r) { return f(r) - mlo.eval(r - lo); };
    auto g_hi = [&](double r) { return f(r) - mhi.eval(hi - r); };
    QuadratureOptions seg = opt;
    seg.n_start = std::max<std::size_t>(opt.n_start / 4, 8);
    IntegralResult a = integrate_refined(g_lo, lo, lo + w, {}, seg);
    IntegralResult b = integrate_refined(f, lo + w, hi - w, {}, opt);
    IntegralResult c = integrate_refined(g_hi, hi - w, hi, {}, seg);
    double analytic = mlo.integral() + mhi.integral();

    IntegralResult res;
    res.endpoint_subtraction_order = 2;
    res.value = a.value + b.value + c.value + analytic;
    res.error_estimate = a.error_estimate + b.error_estimate + c.error_estimate;
    std::size_t levels = std::max({a.refinement_table.size(), b.refinement_table.size(),
                                   c.refinement_table.size()});
    auto row_at = [](const IntegralResult& r, std::size_t k) {
        const auto& t = r.refinement_table;
        return t[std::min(k, t.size() - 1)];
    };
    for (std::size_t k = 0; k < levels; ++k) {
        RefinementRow row;
        row.n = row_at(a, k).n + row_at(b, k).n + row_at(c, k).n;
        row.value = row_at(a, k).value + row_at(b, k).value + row_at(c, k).value + analytic;
        res.refinement_table.push_back(row);
    }
    return res;
}

}  // namespace greenmass
