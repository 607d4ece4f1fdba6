#ifndef SLUGFLOW_QUADRATURE_HPP
#define SLUGFLOW_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace slugflow {

namespace detail {

inline double simpson(const std::function<double(double)>&, double a, double fa, double m,
                      double fm, double b, double fb) {
    (void)m;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                                   double b, double fb, double m, double fm, double whole,
                                   double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, lm, flm, m, fm);
    double right = simpson(f, m, fm, rm, frm, b, fb);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = detail::simpson(f, a, fa, m, fm, b, fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Quadrature with explicit interior split points (integrand may be only
/// piecewise smooth; splits are deduplicated, sorted and clipped to (a,b)).
inline double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                                     std::vector<double> splits, double tol = 1e-10,
                                     int max_depth = 40) {
    if (a == b) return 0.0;
    if (b < a) return -adaptive_simpson_split(f, b, a, std::move(splits), tol, max_depth);
    splits.erase(std::remove_if(splits.begin(), splits.end(),
                                [&](double s) { return !(s > a && s < b); }),
                 splits.end());
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    double total = 0.0, left = a;
    double ntol = tol / static_cast<double>(splits.size() + 1);
    for (double s : splits) {
        total += adaptive_simpson(f, left, s, ntol, max_depth);
        left = s;
    }
    total += adaptive_simpson(f, left, b, ntol, max_depth);
    return total;
}

}  // namespace slugflow

#endif
