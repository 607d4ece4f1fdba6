#include "slugflow/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <stdexcept>

#include "slugflow/rootfind.hpp"

namespace slugflow {

const char* to_string(ShockReason r) {
    switch (r) {
        case ShockReason::VelocityRange: return "velocity-range";
        case ShockReason::ZeroLeftState: return "zero-left-state";
        case ShockReason::EqualS: return "equal-s";
        case ShockReason::CIncreasing: return "c-increasing";
        case ShockReason::OleinikFail: return "oleinik-fail";
        case ShockReason::LaxFail: return "lax-fail";
        case ShockReason::U2ToU1: return "u2-to-u1";
        case ShockReason::Ok: return "ok";
    }
    return "?";
}

const char* to_string(OrbitStatus s) {
    switch (s) {
        case OrbitStatus::Connected: return "connected";
        case OrbitStatus::NoConnection: return "no-connection";
        case OrbitStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void check_bounds(const ShockData& sh) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(sh.s_minus) || !in01(sh.s_plus) || !in01(sh.c_minus) || !in01(sh.c_plus))
        throw std::invalid_argument("shock states must lie in [0,1]");
}

double max_fs(const FluidModel& fl, double c) {
    double m = 0.0;
    for (int i = 1; i < 2048; ++i) m = std::max(m, fl.f_s(i / 2048.0, c));
    return m;
}

}  // namespace

std::pair<double, double> rh_residual(const ModelPair& model, const ShockData& sh) {
    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ad = model.ads;
    double fp = fl.f(sh.s_plus, sh.c_plus), fm = fl.f(sh.s_minus, sh.c_minus);
    double r1 = sh.v * (sh.s_plus - sh.s_minus) - (fp - fm);
    double mp = sh.c_plus * sh.s_plus + ad.a(sh.c_plus);
    double mm = sh.c_minus * sh.s_minus + ad.a(sh.c_minus);
    double r2 = sh.v * (mp - mm) - (sh.c_plus * fp - sh.c_minus * fm);
    return {r1, r2};
}

ShockVerdict s_shock_admissible(const ModelPair& model, double s_minus, double s_plus, double c,
                                double v) {
    check_bounds({s_minus, s_plus, c, c, v});
    if (s_minus == s_plus) return {false, ShockReason::EqualS, {}};
    if (s_minus == 0.0) return {false, ShockReason::ZeroLeftState, {}};
    if (!(v > 0.0) || v >= max_fs(model.fluid, c) * (1.0 + 1e-12))
        return {false, ShockReason::VelocityRange, {}};

    const FluidModel& fl = model.fluid;
    double fm = fl.f(s_minus, c);
    auto Psi = [&](double s) { return fl.f(s, c) - fm - v * (s - s_minus); };
    double dir = (s_plus > s_minus) ? 1.0 : -1.0;
    const double tol = 1e-13 * std::max(1.0, std::fabs(fm));

    // sample 256 interior points, then refine the minimum of Psi*dir to 1e-12
    // in s; a strictly negative refined minimum breaks the E-condition
    double lo = std::min(s_minus, s_plus), hi = std::max(s_minus, s_plus);
    double min_val = std::numeric_limits<double>::infinity();
    int min_idx = 0;
    for (int i = 1; i <= 256; ++i) {
        double s = lo + (hi - lo) * i / 257.0;
        double val = Psi(s) * dir;
        if (val < min_val) {
            min_val = val;
            min_idx = i;
        }
    }
    {
        // golden-section refinement around the worst sample
        double a = lo + (hi - lo) * std::max(min_idx - 1, 0) / 257.0;
        double b = lo + (hi - lo) * std::min(min_idx + 1, 257) / 257.0;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = Psi(x1) * dir, f2 = Psi(x2) * dir;
        while (b - a > 1e-12) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a);
                f1 = Psi(x1) * dir;
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a);
                f2 = Psi(x2) * dir;
            }
        }
        min_val = std::min({min_val, f1, f2});
    }
    if (min_val < -tol) return {false, ShockReason::OleinikFail, {}};

    double fsp = fl.f_s(s_plus, c), fsm = fl.f_s(s_minus, c);
    double eq_tol = 1e-10 * std::max(1.0, v);
    bool left_ok = fsp <= v + eq_tol;
    bool right_ok = v <= fsm + eq_tol;
    bool left_eq = std::fabs(fsp - v) <= eq_tol;
    bool right_eq = std::fabs(v - fsm) <= eq_tol;
    if (!left_ok || !right_ok || (left_eq && right_eq))
        return {false, ShockReason::LaxFail, {}};
    return {true, ShockReason::Ok, {}};
}

CShockRoots c_shock_roots(const ModelPair& model, double v, double c_minus, double c_plus) {
    CShockRoots out;
    if (!(c_minus > c_plus) || !(v > 0.0)) return out;
    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ad = model.ads;
    double d1 = (ad.a(c_minus) - ad.a(c_plus)) / (c_minus - c_plus);

    auto collect = [&](double c, std::array<double, 2>& roots) {
        auto h = [&](double s) { return fl.f(s, c) - v * (s + d1); };
        auto brackets = scan_sign_changes(h, 0.0, 1.0, 512);
        int n = 0;
        for (const auto& br : brackets) {
            if (n >= 2) break;
            auto r = find_root(h, br.first, br.second, 1e-13);
            if (n == 0 || std::fabs(r.x - roots[0]) > 1e-9) roots[n++] = r.x;
        }
        return n;
    };
    out.n_minus = collect(c_minus, out.s_minus);
    out.n_plus = collect(c_plus, out.s_plus);
    return out;
}

ShockVerdict c_shock_admissible(const ModelPair& model, const ShockData& sh) {
    check_bounds(sh);
    if (sh.c_minus == sh.c_plus)
        throw std::invalid_argument("c_shock_admissible: not a c-shock (c+ == c-)");
    auto [r1, r2] = rh_residual(model, sh);
    double scale = std::max(1.0, std::fabs(sh.v));
    if (std::fabs(r1) > 1e-8 * scale || std::fabs(r2) > 1e-8 * scale)
        throw std::invalid_argument("c_shock_admissible: states violate Rankine-Hugoniot");
    if (sh.c_plus > sh.c_minus) return {false, ShockReason::CIncreasing, {}};
    if (sh.s_minus == 0.0) return {false, ShockReason::ZeroLeftState, {}};
    if (!(sh.v > 0.0)) return {false, ShockReason::VelocityRange, {}};

    auto roots = c_shock_roots(model, sh.v, sh.c_minus, sh.c_plus);
    if (roots.n_minus == 2 && roots.n_plus >= 1) {
        bool minus_is_u2 = std::fabs(sh.s_minus - roots.s_minus[1]) <
                           std::fabs(sh.s_minus - roots.s_minus[0]);
        bool plus_is_u1 = roots.n_plus == 1 ||
                          std::fabs(sh.s_plus - roots.s_plus[0]) <
                              std::fabs(sh.s_plus - roots.s_plus[1]);
        if (minus_is_u2 && plus_is_u1 && roots.n_plus == 2)
            return {false, ShockReason::U2ToU1, {}};
    }
    return {true, ShockReason::Ok, {}};
}

ShockVerdict classify_shock(const ModelPair& model, const ShockData& sh) {
    if (sh.c_minus == sh.c_plus)
        return s_shock_admissible(model, sh.s_minus, sh.s_plus, sh.c_minus, sh.v);
    return c_shock_admissible(model, sh);
}

namespace {

struct OrbitShot {
    double s0, c0;      // launch state (already perturbed)
    double st, ct;      // target state
    double sign;        // +1 forward time, -1 backward
};

OrbitResult run_orbit(const ModelPair& model, double v, double d1, double d2,
                      const OrbitShot& shot, long max_steps, double xi_step) {
    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ad = model.ads;
    auto rhs = [&](double s, double c, double& ds, double& dc) {
        ds = shot.sign * (fl.f(std::clamp(s, 0.0, 1.0), std::clamp(c, 0.0, 1.0)) - v * (s + d1));
        dc = shot.sign * v * (d1 * c - d2 - ad.a(std::clamp(c, 0.0, 1.0)));
    };
    double s = shot.s0, c = shot.c0;
    OrbitResult res;
    double dist0 = std::hypot(s - shot.st, c - shot.ct);
    double best = dist0;
    for (long n = 0; n < max_steps; ++n) {
        double k1s, k1c, k2s, k2c, k3s, k3c, k4s, k4c;
        rhs(s, c, k1s, k1c);
        rhs(s + 0.5 * xi_step * k1s, c + 0.5 * xi_step * k1c, k2s, k2c);
        rhs(s + 0.5 * xi_step * k2s, c + 0.5 * xi_step * k2c, k3s, k3c);
        rhs(s + xi_step * k3s, c + xi_step * k3c, k4s, k4c);
        s += xi_step / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
        c += xi_step / 6.0 * (k1c + 2 * k2c + 2 * k3c + k4c);
        double dist = std::hypot(s - shot.st, c - shot.ct);
        best = std::min(best, dist);
        res.steps_used = n + 1;
        res.final_distance = dist;
        if (dist <= 1e-4) {
            res.status = OrbitStatus::Connected;
            return res;
        }
        if (s < -0.1 || s > 1.1 || c < -0.1 || c > 1.1) {
            res.status = OrbitStatus::NoConnection;
            return res;
        }
        double ds, dc;
        rhs(s, c, ds, dc);
        if (std::hypot(ds, dc) < 1e-11 && dist > 1e-3) {
            // converged to a different critical point
            res.status = OrbitStatus::NoConnection;
            return res;
        }
    }
    res.status = OrbitStatus::Inconclusive;
    return res;
}

}  // namespace

OrbitResult traveling_wave_orbit(const ModelPair& model, const ShockData& sh, long max_steps) {
    check_bounds(sh);
    auto [r1, r2] = rh_residual(model, sh);
    double scale = std::max(1.0, std::fabs(sh.v));
    if (std::fabs(r1) > 1e-8 * scale || std::fabs(r2) > 1e-8 * scale)
        throw std::invalid_argument("traveling_wave_orbit: states violate Rankine-Hugoniot");

    OrbitResult res;
    if (sh.s_minus == sh.s_plus && sh.c_minus == sh.c_plus) {
        res.status = OrbitStatus::Connected;  // same critical point
        res.final_distance = 0.0;
        return res;
    }
    const double v = sh.v;
    if (!(v > 0.0)) {
        res.status = OrbitStatus::NoConnection;
        return res;
    }
    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ad = model.ads;
    double d1, d2;
    if (sh.c_minus != sh.c_plus) {
        d1 = (ad.a(sh.c_minus) - ad.a(sh.c_plus)) / (sh.c_minus - sh.c_plus);
        d2 = (sh.c_plus * ad.a(sh.c_minus) - sh.c_minus * ad.a(sh.c_plus)) /
             (sh.c_minus - sh.c_plus);
    } else {
        d1 = fl.f(sh.s_minus, sh.c_minus) / v - sh.s_minus;
        d2 = d1 * sh.c_minus - ad.a(sh.c_minus);
    }
    const double xi_step = 1e-3;

    if (sh.c_minus == sh.c_plus) {
        // 1-D flow in s at fixed c: the eigendirection is (1, 0)
        double lambda = fl.f_s(sh.s_minus, sh.c_minus) - v;
        if (lambda < -1e-10) {
            res.status = OrbitStatus::NoConnection;
            return res;
        }
        // sonic (tangential) shocks leave the saddle algebraically slowly;
        // a larger perturbation stays on the same 1-D orbit
        double delta = (lambda < 0.05) ? 5e-3 * std::fabs(sh.s_plus - sh.s_minus) : 1e-6;
        delta = std::max(delta, 1e-6);
        double dir = (sh.s_plus > sh.s_minus) ? 1.0 : -1.0;
        OrbitShot shot{sh.s_minus + dir * delta, sh.c_minus, sh.s_plus, sh.c_plus, +1.0};
        return run_orbit(model, v, d1, d2, shot, max_steps, xi_step);
    }

    // c-shock. The c-equation decouples and always drains from c- to c+
    // (lambda2 = v (d1 - a_c(c-)) > 0 by concavity); what distinguishes the
    // patterns is the s-fate. Shot selection by the type of the endpoint:
    //  - saddle endpoint (1-D unstable manifold): shoot along the eigenvector;
    //  - node endpoint: every orbit in a delta-ball emanates from it, so a
    //    basin-side shot on either side of s is a legitimate witness.
    // Saddle *targets* are reached by shooting backward from the target.
    double lam2 = v * (d1 - ad.a_z(sh.c_minus));
    if (lam2 <= 0.0) {
        res.status = OrbitStatus::NoConnection;
        return res;
    }
    const double delta = 1e-6;
    std::vector<OrbitShot> shots;
    double lam1m = fl.f_s(sh.s_minus, sh.c_minus) - v;
    double sgn = (sh.c_plus < sh.c_minus) ? -1.0 : 1.0;  // move c toward c+
    if (lam1m > 1e-10) {
        // repelling node: try both s-sides of the slow manifold
        double dc = sgn * delta / std::sqrt(2.0);
        double ds = delta / std::sqrt(2.0);
        shots.push_back({sh.s_minus + ds, sh.c_minus + dc, sh.s_plus, sh.c_plus, +1.0});
        shots.push_back({sh.s_minus - ds, sh.c_minus + dc, sh.s_plus, sh.c_plus, +1.0});
    } else {
        // saddle: unique unstable direction, the lambda2 eigenvector
        double denom = lam2 - lam1m;
        double ws = (std::fabs(denom) > 1e-12) ? fl.f_c(sh.s_minus, sh.c_minus) / denom : 0.0;
        double norm = std::hypot(ws, 1.0);
        shots.push_back({sh.s_minus + sgn * delta * ws / norm, sh.c_minus + sgn * delta / norm,
                         sh.s_plus, sh.c_plus, +1.0});
    }
    // backward shots from (s+, c+), reaching saddle targets along their
    // stable direction
    double lam1p = fl.f_s(sh.s_plus, sh.c_plus) - v;
    double lam2p = v * (d1 - ad.a_z(sh.c_plus));
    double sgn_b = (sh.c_minus > sh.c_plus) ? 1.0 : -1.0;  // move c back toward c-
    if (lam1p < -1e-10) {
        // attracting node: backward-repelling, basin shots on both s-sides
        double dc = sgn_b * delta / std::sqrt(2.0);
        double ds = delta / std::sqrt(2.0);
        shots.push_back({sh.s_plus + ds, sh.c_plus + dc, sh.s_minus, sh.c_minus, -1.0});
        shots.push_back({sh.s_plus - ds, sh.c_plus + dc, sh.s_minus, sh.c_minus, -1.0});
    } else if (lam2p < 0.0) {
        double denom_p = lam2p - lam1p;
        double wsp = (std::fabs(denom_p) > 1e-12) ? fl.f_c(sh.s_plus, sh.c_plus) / denom_p : 0.0;
        double norm_p = std::hypot(wsp, 1.0);
        shots.push_back({sh.s_plus + sgn_b * delta * wsp / norm_p,
                         sh.c_plus + sgn_b * delta / norm_p, sh.s_minus, sh.c_minus, -1.0});
    }

    bool any_inconclusive = false;
    OrbitResult last;
    for (const auto& shot : shots) {
        OrbitResult r = run_orbit(model, v, d1, d2, shot, max_steps, xi_step);
        r.used_backward_shot = shot.sign < 0.0;
        if (r.status == OrbitStatus::Connected) return r;
        if (r.status == OrbitStatus::Inconclusive) any_inconclusive = true;
        last = r;
    }
    if (any_inconclusive) last.status = OrbitStatus::Inconclusive;
    return last;
}

LagrangeShock map_shock_to_lagrange(const ModelPair& model, const ShockData& sh) {
    check_bounds(sh);
    if (!(sh.s_minus > 0.0))
        throw std::invalid_argument("map_shock_to_lagrange: transform needs s- > 0");
    const FluidModel& fl = model.fluid;
    LagrangeShock ls;
    ls.zeta_plus = sh.c_minus;
    ls.zeta_minus = sh.c_plus;
    double fm = fl.f(sh.s_minus, sh.c_minus);
    ls.U_plus = 1.0 / fm;
    double F_plus = -sh.s_minus / fm;
    if (sh.s_plus > 0.0) {
        double fp = fl.f(sh.s_plus, sh.c_plus);
        ls.U_minus = 1.0 / fp;
        double F_minus = -sh.s_plus / fp;
        if (ls.U_minus == ls.U_plus)
            throw std::invalid_argument("map_shock_to_lagrange: degenerate U jump");
        ls.v_star = (F_plus - F_minus) / (ls.U_plus - ls.U_minus);
    } else {
        ls.U_minus = std::numeric_limits<double>::infinity();
        ls.v_star = 0.0;
    }
    return ls;
}

ShockData map_shock_from_lagrange(const ModelPair& model, const LagrangeShock& ls) {
    LagrangeFlux flux(model);
    ShockData sh;
    sh.c_minus = ls.zeta_plus;
    sh.c_plus = ls.zeta_minus;
    sh.s_minus = flux.vartheta(ls.U_plus, ls.zeta_plus);
    sh.s_plus = std::isinf(ls.U_minus) ? 0.0 : flux.vartheta(ls.U_minus, ls.zeta_minus);
    double fp = model.fluid.f(sh.s_plus, sh.c_plus);
    double fm = model.fluid.f(sh.s_minus, sh.c_minus);
    if (sh.s_plus != sh.s_minus) sh.v = (fp - fm) / (sh.s_plus - sh.s_minus);
    return sh;
}

bool lagrange_lax_holds(const LagrangeFlux& flux, const LagrangeShock& ls, double tol) {
    if (ls.zeta_minus != ls.zeta_plus)
        throw std::invalid_argument("lagrange_lax_holds: U-shock expected (equal zeta)");
    double z = ls.zeta_plus;
    double fu_plus = flux.F_U(ls.U_plus, z);
    if (std::isinf(ls.U_minus)) {
        // F_U -> 0 from below at infinity; both inequalities become equalities
        return std::fabs(ls.v_star) <= tol && fu_plus <= tol;
    }
    double fu_minus = flux.F_U(ls.U_minus, z);
    bool left = fu_plus <= ls.v_star + tol;
    bool right = ls.v_star <= fu_minus + tol;
    bool both_equal = std::fabs(fu_plus - ls.v_star) <= tol && std::fabs(ls.v_star - fu_minus) <= tol;
    return left && right && !both_equal;
}

}  // namespace slugflow
