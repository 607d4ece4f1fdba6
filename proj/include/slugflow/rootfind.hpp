#ifndef SLUGFLOW_ROOTFIND_HPP
#define SLUGFLOW_ROOTFIND_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace slugflow {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bracketed root solve: bisection refined by safeguarded Newton/secant steps.
/// Requires f(a), f(b) of opposite (or zero) sign; converges to |interval| <= xtol.
/// Interpolated proposals are clamped into the bracket and a bisection step is
/// forced on every other iteration, so the bracket at least halves per pair of
/// iterations regardless of how badly the proposals behave.
inline RootResult find_root(const std::function<double(double)>& f, double a, double b,
                            double xtol = 1e-12, int max_iter = 200,
                            const std::function<double(double)>* df = nullptr) {
    double flo = f(a), fhi = f(b);
    if (flo == 0.0) return {a, 0.0, 0, true};
    if (fhi == 0.0) return {b, 0.0, 0, true};
    if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0.0)
        throw std::invalid_argument("find_root: endpoints do not bracket a root");

    double lo = a, hi = b;
    for (int it = 0; it < max_iter; ++it) {
        double width = hi - lo;
        if (width <= xtol) {
            double x = 0.5 * (lo + hi);
            return {x, f(x), it, true};
        }
        double x;
        if (it % 2 == 1) {
            x = 0.5 * (lo + hi);
        } else {
            // Newton step from the endpoint with the smaller residual, else secant
            x = std::numeric_limits<double>::quiet_NaN();
            if (df) {
                double x0 = (std::fabs(flo) < std::fabs(fhi)) ? lo : hi;
                double f0 = (x0 == lo) ? flo : fhi;
                double d = (*df)(x0);
                if (std::isfinite(d) && d != 0.0) x = x0 - f0 / d;
            }
            if (!std::isfinite(x) || x <= lo || x >= hi) {
                double denom = fhi - flo;
                x = (denom != 0.0) ? lo - flo * width / denom : 0.5 * (lo + hi);
            }
            double margin = std::max(0.5 * xtol, 1e-3 * width);
            if (x - lo < margin) x = lo + margin;
            if (hi - x < margin) x = hi - margin;
        }
        double fx = f(x);
        if (fx == 0.0) return {x, 0.0, it + 1, true};
        if (flo * fx < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    double x = 0.5 * (lo + hi);
    return {x, f(x), max_iter, (hi - lo) <= 16 * xtol};
}

/// Scan [a,b] on n+1 uniform nodes and return every subinterval with a
/// sign change of f. Exact zeros at nodes are attributed to the left interval.
inline std::vector<std::pair<double, double>> scan_sign_changes(
    const std::function<double(double)>& f, double a, double b, int n) {
    std::vector<std::pair<double, double>> brackets;
    double prev_x = a, prev_f = f(a);
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * static_cast<double>(i) / n;
        double fx = f(x);
        if ((prev_f < 0.0 && fx > 0.0) || (prev_f > 0.0 && fx < 0.0) || prev_f == 0.0)
            brackets.emplace_back(prev_x, x);
        prev_x = x;
        prev_f = fx;
    }
    return brackets;
}

}  // namespace slugflow

#endif
