#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace greenmass {

// Truncated Taylor series with double coefficients; index k holds the x^k term.
// All binary operations truncate to the shorter operand, so a result is valid
// exactly as far as its inputs are.
class Series {
public:
    explicit Series(std::size_t order) : c_(order + 1, 0.0) {}

    static Series constant(double v, std::size_t order) {
        Series s(order);
        s.c_[0] = v;
        return s;
    }

    std::size_t order() const { return c_.size() - 1; }

    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double& at(std::size_t k) { return c_.at(k); }

    Series operator+(const Series& o) const {
        Series r(std::min(order(), o.order()));
        for (std::size_t k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] + o.c_[k];
        return r;
    }

    Series operator-(const Series& o) const {
        Series r(std::min(order(), o.order()));
        for (std::size_t k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] - o.c_[k];
        return r;
    }

    Series operator*(double v) const {
        Series r = *this;
        for (double& x : r.c_) x *= v;
        return r;
    }

    Series operator*(const Series& o) const {
        Series r(std::min(order(), o.order()));
        for (std::size_t k = 0; k <= r.order(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= k; ++j) acc += c_[j] * o.c_[k - j];
            r.c_[k] = acc;
        }
        return r;
    }

    // 1 / this; requires a nonzero constant term.
    Series reciprocal() const {
        if (c_[0] == 0.0) throw std::domain_error("Series::reciprocal: zero constant term");
        Series r(order());
        r.c_[0] = 1.0 / c_[0];
        for (std::size_t k = 1; k <= order(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc / c_[0];
        }
        return r;
    }

    Series operator/(const Series& o) const { return *this * o.reciprocal(); }

    Series derivative() const {
        Series r(order() > 0 ? order() - 1 : 0);
        for (std::size_t k = 1; k <= order(); ++k) r.c_[k - 1] = c_[k] * static_cast<double>(k);
        return r;
    }

    // term-by-term antiderivative with zero constant
    Series antiderivative() const {
        Series r(order() + 1);
        for (std::size_t k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / static_cast<double>(k + 1);
        return r;
    }

    // this / x^k; the dropped low-order coefficients must vanish
    Series shift_down(std::size_t k, double tol = 1e-12) const {
        for (std::size_t j = 0; j < k && j <= order(); ++j)
            if (std::abs(c_[j]) > tol)
                throw std::domain_error("Series::shift_down: nonzero low-order coefficient");
        Series r(order() >= k ? order() - k : 0);
        for (std::size_t j = 0; j <= r.order(); ++j) r.c_[j] = (*this)[j + k];
        return r;
    }

    double eval(double x) const {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    double eval_derivative(double x) const {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 1;) acc = acc * x + c_[k] * static_cast<double>(k);
        return acc;
    }

    double eval_second_derivative(double x) const {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 2;)
            acc = acc * x + c_[k] * static_cast<double>(k) * static_cast<double>(k - 1);
        return acc;
    }

    // index of the first coefficient with |c_k| > tol, or order()+1 if none
    std::size_t valuation(double tol = 1e-12) const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (std::abs(c_[k]) > tol) return k;
        return c_.size();
    }

private:
    std::vector<double> c_;
};

// Taylor series of sin(scale*x) and cos(scale*x) about x = 0.
inline Series sin_series(double scale, std::size_t order) {
    Series s(order);
    double term = scale;  // scale^(2m+1) / (2m+1)!
    for (std::size_t k = 1; k <= order; k += 2) {
        s.at(k) = ((k / 2) % 2 == 0) ? term : -term;
        term *= scale * scale / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
    }
    return s;
}

inline Series cos_series(double scale, std::size_t order) {
    Series s(order);
    double term = 1.0;
    for (std::size_t k = 0; k <= order; k += 2) {
        s.at(k) = ((k / 2) % 2 == 0) ? term : -term;
        term *= scale * scale / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
    }
    return s;
}

}  // namespace greenmass
