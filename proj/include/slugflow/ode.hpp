#ifndef SLUGFLOW_ODE_HPP
#define SLUGFLOW_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace slugflow {

/// Adaptive Dormand-Prince 5(4) integrator over small fixed-size systems.
/// Stores accepted nodes with derivatives; evaluation between nodes is cubic
/// Hermite, so max_step should be kept moderate when dense accuracy matters.
/// Integration direction follows sign(t_end - t_start).

template <int N>
using OdeState = std::array<double, N>;

template <int N>
using OdeRhs = std::function<void(double, const OdeState<N>&, OdeState<N>&)>;

/// Scalar event g(t,y); fires on a sign change matching `direction`
/// (+1 upward, -1 downward, 0 either). Terminal events stop the solve.
template <int N>
struct OdeEvent {
    std::function<double(double, const OdeState<N>&)> g;
    int direction = 0;
    bool terminal = true;
    double skip_until = std::numeric_limits<double>::quiet_NaN();  // |t| progress before arming
};

enum class OdeStatus { Completed, EventStop, GuardStop, StepUnderflow, MaxStepsExceeded };

template <int N>
struct OdeTrajectory {
    struct Node {
        double t;
        OdeState<N> y;
        OdeState<N> dy;
    };
    std::vector<Node> nodes;
    OdeStatus status = OdeStatus::Completed;
    int event_index = -1;   // which event terminated the solve
    double t_event = 0.0;

    double t_front() const { return nodes.front().t; }
    double t_back() const { return nodes.back().t; }

    bool covers(double t) const {
        double a = t_front(), b = t_back();
        return (a <= b) ? (t >= a && t <= b) : (t >= b && t <= a);
    }

    /// Cubic Hermite evaluation at t (clamped to the stored range).
    OdeState<N> eval(double t) const {
        const bool fwd = t_back() >= t_front();
        if (nodes.size() == 1) return nodes.front().y;
        double tc = t;
        if (fwd) tc = std::clamp(t, t_front(), t_back());
        else tc = std::clamp(t, t_back(), t_front());
        // binary search for the bracketing node pair
        size_t lo = 0, hi = nodes.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            bool left = fwd ? (nodes[mid].t <= tc) : (nodes[mid].t >= tc);
            if (left) lo = mid; else hi = mid;
        }
        const Node& n0 = nodes[lo];
        const Node& n1 = nodes[hi];
        double h = n1.t - n0.t;
        if (h == 0.0) return n0.y;
        double u = (tc - n0.t) / h;
        double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
        double h10 = u * (1 - u) * (1 - u);
        double h01 = u * u * (3 - 2 * u);
        double h11 = u * u * (u - 1);
        OdeState<N> y;
        for (int i = 0; i < N; ++i)
            y[i] = h00 * n0.y[i] + h10 * h * n0.dy[i] + h01 * n1.y[i] + h11 * h * n1.dy[i];
        return y;
    }
};

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 => automatic
    long max_steps = 200000;
};

namespace detail {
// Dormand-Prince RK5(4)7M coefficients
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_e[7] = {71.0 / 57600,     0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,  -1.0 / 40};
}  // namespace detail

/// Integrate y' = rhs(t,y) from t0 to t1. `guard` (optional) is evaluated at
/// every trial state; returning false rejects the state and stops the solve at
/// the last accepted node with GuardStop (used for domain-leaving protection).
template <int N>
OdeTrajectory<N> integrate_ode(const OdeRhs<N>& rhs, double t0, const OdeState<N>& y0,
                               double t1, const OdeOptions& opts = {},
                               const std::vector<OdeEvent<N>>& events = {},
                               const std::function<bool(double, const OdeState<N>&)>* guard = nullptr) {
    OdeTrajectory<N> out;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    if (span == 0.0) {
        OdeState<N> dy;
        rhs(t0, y0, dy);
        out.nodes.push_back({t0, y0, dy});
        return out;
    }

    OdeState<N> y = y0, k1;
    rhs(t0, y, k1);
    out.nodes.push_back({t0, y, k1});

    std::vector<double> gprev(events.size());
    for (size_t i = 0; i < events.size(); ++i) gprev[i] = events[i].g(t0, y);

    double h = opts.initial_step > 0.0 ? opts.initial_step : std::min(span / 100.0, opts.max_step);
    h = std::min(h, opts.max_step);
    double t = t0;
    const double hmin = span * 1e-15;

    std::array<OdeState<N>, 7> k;
    k[0] = k1;

    for (long step = 0; step < opts.max_steps; ++step) {
        if (dir * (t1 - t) <= 0.0) {
            out.status = OdeStatus::Completed;
            return out;
        }
        h = std::min({h, opts.max_step, std::fabs(t1 - t)});
        if (h < hmin) {
            out.status = OdeStatus::StepUnderflow;
            return out;
        }
        const double hs = dir * h;

        bool bad = false;
        OdeState<N> ytmp, ynew, yerr{};
        for (int stage = 1; stage < 7 && !bad; ++stage) {
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < stage; ++j) acc += detail::dp_a[stage][j] * k[j][i];
                ytmp[i] = y[i] + hs * acc;
            }
            double ts = t + detail::dp_c[stage] * hs;
            if (guard && !(*guard)(ts, ytmp)) { bad = true; break; }
            rhs(ts, ytmp, k[stage]);
            for (int i = 0; i < N; ++i)
                if (!std::isfinite(k[stage][i])) { bad = true; break; }
        }
        if (bad) {
            h *= 0.5;
            if (h < hmin) {
                out.status = OdeStatus::GuardStop;
                return out;
            }
            continue;
        }
        // 5th order solution is stage 6's ytmp (c=1 row equals the b-weights)
        ynew = ytmp;
        for (int i = 0; i < N; ++i) {
            double e = 0.0;
            for (int j = 0; j < 7; ++j) e += detail::dp_e[j] * k[j][i];
            yerr[i] = hs * e;
        }
        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            double sc = opts.atol + opts.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err = std::max(err, std::fabs(yerr[i]) / sc);
        }
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }

        double tnew = t + hs;
        OdeState<N> k_new;
        rhs(tnew, ynew, k_new);  // FSAL stage doubles as the node derivative
        bool knew_ok = true;
        for (int i = 0; i < N; ++i) knew_ok = knew_ok && std::isfinite(k_new[i]);
        if (!knew_ok || (guard && !(*guard)(tnew, ynew))) {
            h *= 0.5;
            if (h < hmin) { out.status = OdeStatus::GuardStop; return out; }
            continue;
        }
        out.nodes.push_back({tnew, ynew, k_new});

        // event detection over [t, tnew]
        for (size_t ie = 0; ie < events.size(); ++ie) {
            const auto& ev = events[ie];
            if (std::isfinite(ev.skip_until) && dir * (tnew - ev.skip_until) < 0.0) {
                gprev[ie] = ev.g(tnew, ynew);
                continue;
            }
            double gnew = ev.g(tnew, ynew);
            bool fire = false;
            if (gprev[ie] <= 0.0 && gnew > 0.0 && ev.direction >= 0) fire = true;
            if (gprev[ie] >= 0.0 && gnew < 0.0 && ev.direction <= 0) fire = true;
            if (gprev[ie] == 0.0 && gnew == 0.0) fire = false;
            if (fire && ev.terminal) {
                // bisect on the dense output, truncate the trajectory there
                double ta = t, tb = tnew, ga = gprev[ie];
                for (int it = 0; it < 80 && std::fabs(tb - ta) > 1e-15 * (1.0 + std::fabs(tb)); ++it) {
                    double tm = 0.5 * (ta + tb);
                    double gm = ev.g(tm, out.eval(tm));
                    bool left = (ga <= 0.0 && gm <= 0.0) || (ga >= 0.0 && gm >= 0.0);
                    if (left) { ta = tm; ga = gm; } else { tb = tm; }
                }
                double te = 0.5 * (ta + tb);
                OdeState<N> ye = out.eval(te);
                OdeState<N> ke;
                rhs(te, ye, ke);
                out.nodes.back() = {te, ye, ke};
                out.status = OdeStatus::EventStop;
                out.event_index = static_cast<int>(ie);
                out.t_event = te;
                return out;
            }
            gprev[ie] = gnew;
        }

        t = tnew;
        y = ynew;
        k[0] = k_new;
        h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    }
    out.status = OdeStatus::MaxStepsExceeded;
    return out;
}

}  // namespace slugflow

#endif
