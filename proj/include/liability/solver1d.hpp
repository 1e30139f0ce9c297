// One-dimensional minimization primitives shared by the equilibrium solvers:
// derivative-sign scan + bisection on the first-order condition, with a
// golden-section fallback, plus the parabolic sub-cell refinement used by
// the grid oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace liability {

// Raised when a scan of the objective's derivative finds more than one
// minimum candidate, i.e. the unimodality premise of the solver is violated.
class NonUnimodalError : public std::runtime_error {
public:
    explicit NonUnimodalError(const std::string& what) : std::runtime_error(what) {}
};

struct Minimum1D {
    double x = 0.0;
    double derivative_residual = 0.0;
    bool at_lower = false;
    bool at_upper = false;
};

namespace detail {

inline double golden_section(const std::function<double(double)>& f, double lo,
                             double hi, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Bisects df on [a, b] assuming df(a) < 0 <= df(b).
inline double bisect_derivative(const std::function<double(double)>& df, double a,
                                double b, double tol) {
    for (int i = 0; i < 200 && (b - a) > tol; ++i) {
        double mid = 0.5 * (a + b);
        if (df(mid) < 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Minimizes f on [lo, hi] given its derivative df. The derivative is scanned
// at scan_points to classify the sign pattern: a single (- to +) crossing is
// bisected to the first-order condition; all-nonnegative or all-nonpositive
// means a boundary optimum; a (+ to -) crossing without any minimum crossing
// compares the two boundary values; multiple minimum crossings raise
// NonUnimodalError tagged with `context`.
inline Minimum1D minimize_scalar(const std::function<double(double)>& f,
                                 const std::function<double(double)>& df, double lo,
                                 double hi, int scan_points, const std::string& context,
                                 double bisect_tol = 1e-13) {
    if (!(hi > lo)) throw std::invalid_argument("minimize_scalar: empty interval");
    scan_points = std::max(scan_points, 3);
    double step = (hi - lo) / (scan_points - 1);

    double prev_x = lo;
    double prev_d = df(lo);
    int crossings = 0;
    double bracket_lo = lo, bracket_hi = hi;
    bool any_negative = prev_d < 0.0;
    bool any_positive = prev_d > 0.0;
    for (int i = 1; i < scan_points; ++i) {
        double x = (i == scan_points - 1) ? hi : lo + i * step;
        double d = df(x);
        any_negative = any_negative || d < 0.0;
        any_positive = any_positive || d > 0.0;
        if (prev_d < 0.0 && d >= 0.0) {
            ++crossings;
            bracket_lo = prev_x;
            bracket_hi = x;
        }
        prev_x = x;
        prev_d = d;
    }

    if (crossings > 1)
        throw NonUnimodalError("multiple first-order-condition roots detected in " + context);

    Minimum1D result;
    if (crossings == 1) {
        result.x = detail::bisect_derivative(df, bracket_lo, bracket_hi, bisect_tol);
        result.derivative_residual = df(result.x);
        return result;
    }
    if (!any_negative) {  // derivative >= 0 everywhere: objective increasing
        result.x = lo;
        result.at_lower = true;
        result.derivative_residual = df(lo);
        return result;
    }
    if (!any_positive) {  // derivative <= 0 everywhere: objective decreasing
        result.x = hi;
        result.at_upper = true;
        result.derivative_residual = df(hi);
        return result;
    }
    // (+ to -) only: interior maximum, minima at both ends.
    if (f(lo) <= f(hi)) {
        result.x = lo;
        result.at_lower = true;
    } else {
        result.x = hi;
        result.at_upper = true;
    }
    result.derivative_residual = df(result.x);
    return result;
}

// Value-scan variant for objectives without a cheap analytic derivative
// (the Stackelberg leader). A coarse value scan brackets the global
// minimum; the bracket is then closed on the central-difference derivative
// when it changes sign there, or by golden section otherwise.
inline Minimum1D minimize_scalar_scan(const std::function<double(double)>& f, double lo,
                                      double hi, int scan_points,
                                      double fd_step = 1e-6, double bisect_tol = 1e-12,
                                      bool* tie_detected = nullptr) {
    if (!(hi > lo)) throw std::invalid_argument("minimize_scalar_scan: empty interval");
    scan_points = std::max(scan_points, 3);
    double step = (hi - lo) / (scan_points - 1);

    int best = 0;
    double best_value = f(lo);
    double second_best = std::numeric_limits<double>::infinity();
    for (int i = 1; i < scan_points; ++i) {
        double x = (i == scan_points - 1) ? hi : lo + i * step;
        double v = f(x);
        if (v < best_value) {
            second_best = best_value;
            best_value = v;
            best = i;
        } else if (v < second_best) {
            second_best = v;
        }
    }
    if (tie_detected != nullptr)
        *tie_detected = std::isfinite(second_best) &&
                        (second_best - best_value) <= 1e-9 * std::max(1.0, std::abs(best_value));

    double a = (best == 0) ? lo : lo + (best - 1) * step;
    double b = (best == scan_points - 1) ? hi : lo + (best + 1) * step;
    a = std::max(a, lo);
    b = std::min(b, hi);

    auto df = [&](double x) {
        double xl = std::max(x - fd_step, lo);
        double xr = std::min(x + fd_step, hi);
        return (f(xr) - f(xl)) / (xr - xl);
    };

    Minimum1D result;
    if (best == 0 && df(lo) >= 0.0) {
        result.x = lo;
        result.at_lower = true;
        return result;
    }
    if (best == scan_points - 1 && df(hi) <= 0.0) {
        result.x = hi;
        result.at_upper = true;
        return result;
    }
    double da = df(a), db = df(b);
    if (da < 0.0 && db >= 0.0)
        result.x = detail::bisect_derivative(df, a, b, bisect_tol);
    else
        result.x = detail::golden_section(f, a, b, bisect_tol * 10.0);
    result.derivative_residual = df(result.x);
    return result;
}

// Vertex of the parabola through three equally spaced samples, clamped to
// [x0 - h, x0 + h]; returns x0 when the samples are not locally convex.
inline double parabolic_refine(double x0, double h, double f_minus, double f_0,
                               double f_plus) {
    double denom = f_minus - 2.0 * f_0 + f_plus;
    if (!(denom > 0.0)) return x0;
    double offset = 0.5 * (f_minus - f_plus) / denom;
    offset = std::clamp(offset, -1.0, 1.0);
    return x0 + offset * h;
}

}  // namespace liability
