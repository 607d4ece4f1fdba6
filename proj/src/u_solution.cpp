#include "slugflow/u_solution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "slugflow/rootfind.hpp"

namespace slugflow {

double UJCurve::slope_sigma(double z) const {
    const AdsorptionModel& ads = flux_.model().ads;
    return (z > 0.0) ? ads.a(z) / z : ads.a_z(0.0);
}

double UJCurve::at(double z) const {
    return flux_.U_from_slope(slope_sigma(z), z, flux_.model().fluid.s_welge(z), 1.0 - 1e-13);
}

std::vector<std::pair<double, double>> UJCurve::tabulate(int n) const {
    std::vector<std::pair<double, double>> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double z = static_cast<double>(i) / n;
        out.emplace_back(z, at(z));
    }
    return out;
}

double u_plus_OA(const LagrangeFlux& flux, const ZetaField& zf) {
    double U = flux.U_from_slope(zf.v10(), 1.0, flux.model().fluid.s_welge(1.0), 1.0 - 1e-13);
    if (!(U > 1.0) || !(std::fabs(flux.F_U(U, 1.0) - zf.v10()) < 1e-9))
        throw std::runtime_error("u_plus_OA: no root of F_U(.,1) = v(1,0) on (1, U_max(1))");
    return U;
}

double u_minus_OA(const LagrangeFlux& flux, const ZetaField& zf, double U_plus) {
    const FluidModel& fl = flux.model().fluid;
    double v10 = zf.v10();
    double F_plus = flux.F(U_plus, 1.0);
    double s_hi = flux.vartheta(U_plus, 0.0);  // U > U_plus means s below this
    auto G = [&](double s) {
        double U = 1.0 / fl.f(s, 0.0);
        return F_plus + s * U - v10 * (U_plus - U);
    };
    const int n = 4096;
    double best_U = -1.0;
    double prev_s = s_hi * (1.0 - 1e-10), prev_g = G(prev_s);
    for (int i = 1; i <= n; ++i) {
        double s = s_hi * (1.0 - static_cast<double>(i) / (n + 1)) + 1e-9 * (i == n + 1);
        if (s <= 1e-9) break;
        double g = G(s);
        if ((prev_g < 0 && g > 0) || (prev_g > 0 && g < 0)) {
            auto r = find_root(G, std::min(prev_s, s), std::max(prev_s, s), 1e-15);
            double U = 1.0 / fl.f(r.x, 0.0);
            best_U = std::max(best_U, U);
        }
        prev_s = s;
        prev_g = g;
    }
    if (best_U <= U_plus)
        throw std::runtime_error("u_minus_OA: no root with U- > U+ (outside the model regime)");
    // Newton polish on the secant equation in U
    for (int it = 0; it < 4; ++it) {
        double g = F_plus - flux.F(best_U, 0.0) - v10 * (U_plus - best_U);
        double dg = -flux.F_U(best_U, 0.0) + v10;
        if (dg == 0.0) break;
        best_U -= g / dg;
    }
    return best_U;
}

double f5_lhs(const LagrangeFlux& flux, double z) {
    UJCurve uj(flux);
    double U = uj.at(z);
    FluxDerivs d = flux.derivs(U, z);
    const AdsorptionModel& ads = flux.model().ads;
    return -d.F_UU * d.F_z + (d.F_Uz + ads.b_over_zeta(z)) * ads.b(z);
}

std::vector<double> find_f5_sign_changes(const LagrangeFlux& flux, double tol) {
    // uniform scan plus a logarithmic tail toward 0 where U_J varies fastest
    std::set<double> grid;
    for (int i = 0; i <= 512; ++i) grid.insert(1e-6 + (1.0 - 1e-6) * i / 512.0);
    for (int i = 0; i <= 256; ++i) grid.insert(1e-6 * std::pow(1e5, i / 256.0));
    std::vector<double> zs(grid.begin(), grid.end());

    std::vector<double> changes;
    double prev_z = zs.front(), prev_f = f5_lhs(flux, prev_z);
    for (size_t i = 1; i < zs.size(); ++i) {
        double z = zs[i], fz = f5_lhs(flux, z);
        if ((prev_f < 0 && fz > 0) || (prev_f > 0 && fz < 0)) {
            auto r = find_root([&](double zz) { return f5_lhs(flux, zz); }, prev_z, z, tol);
            changes.push_back(r.x);
            if (changes.size() > 16)
                throw std::runtime_error(
                    "find_f5_sign_changes: infinite-sign-change regime unsupported");
        }
        prev_z = z;
        prev_f = fz;
    }
    return changes;
}

namespace {

OdeRhs<2> char_rhs(const LagrangeFlux& flux, const AdsorptionModel& ads) {
    return [flux, ads](double z, const OdeState<2>& y, OdeState<2>& dy) {
        double U = std::max(y[0], 1.0 + 1e-13);
        FluxDerivs d = flux.derivs(U, z);
        double az = ads.a_z(z);
        double den = d.F_U - az;
        if (den <= 1e-12) {  // transversality collapsed; poison the step
            dy[0] = dy[1] = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double azz = ads.a_zz(z);
        dy[0] = -d.F_z / den;
        dy[1] = azz * az / (1.0 + az * az) + azz / den;
    };
}

double psi_TA(const LagrangeFlux& flux, const ZetaField& zf, double U0) {
    double az1 = zf.ads().a_z(1.0);
    double fu = flux.F_U(U0, 1.0);
    if (!(fu > az1)) throw std::runtime_error("psi_TA: F_U(U0,1) <= a_z(1)");
    return std::log(zf.t_inj() / (fu - az1)) + 0.5 * std::log(1.0 + az1 * az1);
}

}  // namespace

CharCurve integrate_char(const LagrangeFlux& flux, const ZetaField& zf, CurveFamily family,
                         double param, const ConeBuildOptions& opts) {
    CharCurve c;
    c.family = family;
    c.param = param;
    double z0, U0, psi0;
    if (family == CurveFamily::TA) {
        if (!(param > 1.0)) throw std::invalid_argument("integrate_char: TA curves need U0 > 1");
        z0 = 1.0;
        U0 = param;
        psi0 = psi_TA(flux, zf, U0);
    } else {
        if (!(param > 0.0 && param <= 1.0))
            throw std::invalid_argument("integrate_char: Jouguet curves need zeta0 in (0,1]");
        z0 = param;
        U0 = UJCurve(flux).at(param);
        psi0 = zf.psi_front(param);
    }
    c.zeta_start = z0;

    OdeOptions oo;
    oo.rtol = opts.ode_rtol;
    oo.atol = 1e-12;
    oo.max_step = 1.0 / 64.0;
    std::vector<OdeEvent<2>> events(1);
    const ZetaField* zfp = &zf;
    events[0].g = [zfp](double z, const OdeState<2>& y) { return y[1] - zfp->psi_front(z); };
    events[0].direction = +1;  // crossing out through the front
    events[0].terminal = true;

    c.traj = integrate_ode<2>(char_rhs(flux, zf.ads()), z0, {U0, psi0}, 0.0, oo, events);
    switch (c.traj.status) {
        case OdeStatus::EventStop:
            c.crossed_front = true;
            c.zeta_end = c.traj.t_event;
            break;
        case OdeStatus::Completed:
            c.zeta_end = 0.0;
            break;
        default:
            c.guard_stopped = true;
            c.zeta_end = c.traj.nodes.back().t;
            break;
    }
    if (!c.crossed_front) {
        // initial-roundoff guard: a curve launched exactly on the front can sit
        // at g = +eps and never produce the upward sign change the event needs;
        // sweep the stored nodes for a decisive excursion outside the front
        auto& nodes = c.traj.nodes;
        for (size_t k = 1; k < nodes.size(); ++k) {
            double g = nodes[k].y[1] - zf.psi_front(nodes[k].t);
            if (g > 1e-9) {
                double ta = nodes[k - 1].t, tb = nodes[k].t;
                for (int it = 0; it < 60 && std::fabs(ta - tb) > 1e-15; ++it) {
                    double tm = 0.5 * (ta + tb);
                    double gm = c.traj.eval(tm)[1] - zf.psi_front(tm);
                    if (gm > 0.0) tb = tm;
                    else ta = tm;
                }
                double te = 0.5 * (ta + tb);
                OdeState<2> ye = c.traj.eval(te);
                OdeState<2> ke;
                char_rhs(flux, zf.ads())(te, ye, ke);
                nodes.resize(k);
                nodes.push_back({te, ye, ke});
                c.crossed_front = true;
                c.guard_stopped = false;
                c.zeta_end = te;
                break;
            }
        }
    }
    return c;
}

namespace {

// maximal excess of a characteristic above the front, max_z (psi - psi_front),
// over z in (0, z_launch - arm]; integrates without the terminal event so
// crossing curves keep going. Also reports the location of the maximum.
double max_front_excess(const LagrangeFlux& flux, const ZetaField& zf, CurveFamily family,
                        double param, const ConeBuildOptions& opts, double* arg_z = nullptr) {
    double z0, U0, psi0;
    if (family == CurveFamily::TA) {
        z0 = 1.0;
        U0 = param;
        psi0 = psi_TA(flux, zf, param);
    } else {
        z0 = param;
        U0 = UJCurve(flux).at(param);
        psi0 = zf.psi_front(param);
    }
    OdeOptions oo;
    oo.rtol = opts.ode_rtol;
    oo.atol = 1e-12;
    oo.max_step = 1.0 / 64.0;
    auto traj = integrate_ode<2>(char_rhs(flux, zf.ads()), z0, {U0, psi0}, 0.0, oo);
    const double arm = 1e-6;
    double best = -std::numeric_limits<double>::infinity();
    double best_z = z0;
    for (const auto& nd : traj.nodes) {
        if (nd.t <= 0.0 || nd.t >= z0 - arm) continue;
        double h = nd.y[1] - zf.psi_front(nd.t);
        if (h > best) {
            best = h;
            best_z = nd.t;
        }
    }
    // golden-section polish around the best node
    double a = std::max(best_z - 1.0 / 32.0, 1e-12);
    double b = std::min(best_z + 1.0 / 32.0, z0 - arm);
    if (b > a && traj.covers(a) && traj.covers(b)) {
        auto h_of = [&](double z) { return traj.eval(z)[1] - zf.psi_front(z); };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = h_of(x1), f2 = h_of(x2);
        while (b - a > 1e-13) {
            if (f1 > f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a);
                f1 = h_of(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a);
                f2 = h_of(x2);
            }
        }
        if (std::max(f1, f2) > best) {
            best = std::max(f1, f2);
            best_z = 0.5 * (a + b);
        }
    }
    if (traj.status != OdeStatus::Completed && best < 0.0) {
        // denominator collapse happens well past the front: count as crossed
        best = 1e-6;
    }
    if (arg_z) *arg_z = best_z;
    return best;
}

}  // namespace

Tangency shoot_tangency(const LagrangeFlux& flux, const ZetaField& zf, CurveFamily family,
                        double param_lo, double param_hi, const ConeBuildOptions& opts) {
    double rlo = max_front_excess(flux, zf, family, param_lo, opts);
    double rhi = max_front_excess(flux, zf, family, param_hi, opts);
    if (rlo == 0.0 || rhi == 0.0 || (rlo < 0.0) == (rhi < 0.0)) {
        std::ostringstream os;
        os << "shoot_tangency: bracket not found (excess " << rlo << " at " << param_lo << ", "
           << rhi << " at " << param_hi << ")";
        throw std::runtime_error(os.str());
    }
    double lo = param_lo, hi = param_hi;
    for (int it = 0; it < 64 && std::fabs(hi - lo) > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double r = max_front_excess(flux, zf, family, mid, opts);
        if ((r < 0.0) == (rlo < 0.0)) lo = mid;
        else hi = mid;
    }
    Tangency t;
    t.family = family;
    t.param = 0.5 * (lo + hi);
    double zmax;
    max_front_excess(flux, zf, family, t.param, opts, &zmax);
    t.zeta_touch = zmax;
    // residuals of the touching curve against the front data
    CharCurve c = integrate_char(flux, zf, family, t.param, opts);
    double Uz = c.traj.covers(zmax) ? c.traj.eval(zmax)[0] : c.U_at(zmax);
    double Pz = c.traj.covers(zmax) ? c.traj.eval(zmax)[1] : c.psi_at(zmax);
    t.U_residual = Uz - UJCurve(flux).at(zmax);
    t.psi_residual = Pz - zf.psi_front(zmax);
    return t;
}

double locate_C(const LagrangeFlux& flux, const ZetaField& zf, double zeta_B,
                const ConeBuildOptions& opts) {
    double hi = u_plus_OA(flux, zf);
    try {
        return shoot_tangency(flux, zf, CurveFamily::TA, 1.0 + 1e-8, hi * (1.0 - 1e-12), opts)
            .param;
    } catch (const std::runtime_error& e) {
        std::ostringstream os;
        os << "locate_C near zeta_B=" << zeta_B << ": " << e.what() << "; regime misclassified";
        throw std::runtime_error(os.str());
    }
}

ConeSolution build_cone(const ModelPair& model, const ZetaField& zf,
                        const ConeBuildOptions& opts) {
    LagrangeFlux flux(model);
    ConeSolution cone(flux, zf);
    cone.U_plus_OA_ = u_plus_OA(flux, zf);
    cone.U_minus_OA_ = u_minus_OA(flux, zf, cone.U_plus_OA_);
    cone.sigma_OA_ = flux.F_U(cone.U_minus_OA_, 0.0);
    cone.sign_changes_ = find_f5_sign_changes(flux, 1e-10);

    const double U_plus = cone.U_plus_OA_;

    // Phase 1: TA family on a grid logarithmic in U0 - 1. Curves that reach
    // the front terminate there and record the value they bring; the front
    // needs the tangency (Jouguet) condition only below the lowest arrival.
    std::set<double> ta_params;
    {
        double lo = 1e-8, hi = U_plus - 1.0;
        for (int i = 0; i < opts.n_ta; ++i)
            ta_params.insert(1.0 + lo * std::pow(hi / lo, static_cast<double>(i) / (opts.n_ta - 1)));
    }
    std::vector<CharCurve> ta_curves;
    for (double U0 : ta_params)
        ta_curves.push_back(integrate_char(flux, zf, CurveFamily::TA, U0, opts));

    bool any_ta_crossed = false;
    for (const auto& c : ta_curves) any_ta_crossed = any_ta_crossed || c.crossed_front;

    double boundary = 1.0;  // lowest front level already fed by arrivals
    if (any_ta_crossed) {
        // bracket the tangent curve between the last interior curve and the
        // first crossing one, then shoot for it
        double p_cross = std::numeric_limits<double>::infinity();
        for (const auto& c : ta_curves)
            if (c.crossed_front) p_cross = std::min(p_cross, c.param);
        double p_in = 1.0 + 1e-8;
        for (const auto& c : ta_curves)
            if (!c.crossed_front && c.param < p_cross) p_in = std::max(p_in, c.param);
        Tangency shot = shoot_tangency(flux, zf, CurveFamily::TA, p_in, p_cross, opts);
        cone.c_params_.push_back(shot.param);
        cone.tangencies_.push_back(shot);
        boundary = shot.zeta_touch;
        // densify: cluster around C plus a uniform fill of the crossing family
        // interior-side cluster only: curves just above C have noise-level
        // front excursions (crossing is undecidable there), while the uniform
        // fill below supplies decisive crossing records
        std::set<double> extra;
        for (int k = 1; k <= std::min(opts.refine_factor, 4); ++k) {
            double d = (U_plus - 1.0) * 1e-3 * std::pow(0.25, k);
            if (shot.param - d > 1.0 + 1e-9) extra.insert(shot.param - d);
        }
        for (int i = 1; i < opts.n_jouguet; ++i)
            extra.insert(shot.param + (U_plus - shot.param) * static_cast<double>(i) /
                                          opts.n_jouguet);
        for (double U0 : extra)
            if (!ta_params.count(U0)) {
                ta_params.insert(U0);
                ta_curves.push_back(integrate_char(flux, zf, CurveFamily::TA, U0, opts));
            }
        std::sort(ta_curves.begin(), ta_curves.end(),
                  [](const CharCurve& a, const CharCurve& b) { return a.param < b.param; });
    }
    for (auto& c : ta_curves) cone.curves_.push_back(std::move(c));

    // Phase 2: tangency-condition families, generation by generation downward.
    // Each interval ends where the next sign change sits (or at 0); curves of
    // one generation may cross the front inside a lower break stretch, which
    // seeds the next generation below the located touch point.
    const auto& signs = cone.sign_changes_;
    for (int generation = 0; generation < 8 && boundary > opts.zeta0_min; ++generation) {
        double lo = 0.0;
        for (double z : signs)
            if (z < boundary * (1.0 - 1e-12)) lo = std::max(lo, z);
        double mid_probe = 0.5 * (lo + boundary);
        if (f5_lhs(flux, mid_probe) >= 0.0)
            throw std::runtime_error(
                "build_cone: tangency condition fails on a front stretch with no arrivals");
        double glo = std::max(lo, opts.zeta0_min);
        bool reaches_A = boundary == 1.0;
        double hi_eff = reaches_A ? 1.0 : boundary * (1.0 - 1e-5);
        std::vector<double> jg;
        for (int k = 0; k < opts.n_jouguet; ++k)
            jg.push_back(glo + (hi_eff - glo) * static_cast<double>(k) / (opts.n_jouguet - 1));
        if (!reaches_A) {
            for (int k = 1; k <= std::min(opts.refine_factor, 4); ++k)
                jg.push_back(boundary * (1.0 - 1e-3 * std::pow(0.25, k)));
        }
        std::sort(jg.begin(), jg.end());
        jg.erase(std::unique(jg.begin(), jg.end()), jg.end());
        cone.jouguet_intervals_.emplace_back(glo, hi_eff);

        std::vector<CharCurve> gen_curves;
        for (auto it = jg.rbegin(); it != jg.rend(); ++it)
            gen_curves.push_back(integrate_char(flux, zf, CurveFamily::Jouguet, *it, opts));

        bool any_crossed = false;
        for (const auto& c : gen_curves) any_crossed = any_crossed || c.crossed_front;
        double next_boundary = -1.0;
        if (any_crossed) {
            // adjacent crossed/uncrossed pair brackets this generation's
            // tangent curve
            double p_a = -1.0, p_b = -1.0;
            for (size_t i = 0; i + 1 < gen_curves.size(); ++i) {
                if (gen_curves[i].crossed_front != gen_curves[i + 1].crossed_front) {
                    p_a = gen_curves[i].param;
                    p_b = gen_curves[i + 1].param;
                    break;
                }
            }
            if (p_a > 0.0) {
                Tangency shot = shoot_tangency(flux, zf, CurveFamily::Jouguet, p_a, p_b, opts);
                cone.tangencies_.push_back(shot);
                next_boundary = shot.zeta_touch;
                for (int k = 1; k <= std::min(opts.refine_factor, 4); ++k) {
                    double d = (hi_eff - glo) * 1e-3 * std::pow(0.25, k);
                    for (double p : {shot.param + d, shot.param - d})
                        if (p > glo && p < hi_eff)
                            gen_curves.push_back(integrate_char(flux, zf, CurveFamily::Jouguet, p, opts));
                }
                std::sort(gen_curves.begin(), gen_curves.end(),
                          [](const CharCurve& a, const CharCurve& b) { return a.param > b.param; });
            }
        }
        for (auto& c : gen_curves) cone.curves_.push_back(std::move(c));
        if (next_boundary < 0.0) break;
        boundary = next_boundary;
    }

    // crossing records anchor the front value outside the tangency intervals
    for (const auto& c : cone.curves_)
        if (c.crossed_front)
            cone.crossing_table_.emplace_back(c.zeta_end, c.U_at(c.zeta_end));
    for (const auto& t : cone.tangencies_)
        cone.crossing_table_.emplace_back(t.zeta_touch, cone.uj_.at(t.zeta_touch));
    if (any_ta_crossed) cone.crossing_table_.emplace_back(1.0, cone.U_plus_OA_);
    std::sort(cone.crossing_table_.begin(), cone.crossing_table_.end());
    cone.crossing_table_.erase(
        std::unique(cone.crossing_table_.begin(), cone.crossing_table_.end(),
                    [](const auto& a, const auto& b) { return std::fabs(a.first - b.first) < 1e-13; }),
        cone.crossing_table_.end());

    // family order: psi strictly increasing among alive curves at every level
    for (int lev = 1; lev < 40; ++lev) {
        double z = static_cast<double>(lev) / 40.0;
        double prev = -std::numeric_limits<double>::infinity();
        const CharCurve* prev_curve = nullptr;
        for (const auto& c : cone.curves_) {
            if (!c.alive_at(z)) continue;
            double p = c.psi_at(z);
            if (p < prev - 1e-5) {
                std::ostringstream os;
                os << "build_cone: characteristic family order violated (psi crossing) at zeta="
                   << z << ": curve(" << (c.family == CurveFamily::TA ? "TA" : "J") << ", "
                   << c.param << ") psi=" << p << " below curve("
                   << (prev_curve->family == CurveFamily::TA ? "TA" : "J") << ", "
                   << prev_curve->param << ") psi=" << prev
                   << "; integrator tolerance too loose";
                throw std::runtime_error(os.str());
            }
            if (p > prev) {
                prev = p;
                prev_curve = &c;
            }
        }
    }

    // A-characteristic coincidence: the continued TA curve and the tangency
    // curve from zeta0 = 1 are the same trajectory
    if (signs.size() % 2 == 0) {
        const CharCurve* ta_top = nullptr;
        const CharCurve* jg_top = nullptr;
        for (const auto& c : cone.curves_) {
            if (c.family == CurveFamily::TA && (!ta_top || c.param > ta_top->param)) ta_top = &c;
            if (c.family == CurveFamily::Jouguet && (!jg_top || c.param > jg_top->param)) jg_top = &c;
        }
        if (ta_top && jg_top && jg_top->param == 1.0) {
            for (double z : {0.25, 0.5, 0.75}) {
                if (!ta_top->alive_at(z) || !jg_top->alive_at(z)) continue;
                if (std::fabs(ta_top->U_at(z) - jg_top->U_at(z)) > 1e-6 ||
                    std::fabs(ta_top->psi_at(z) - jg_top->psi_at(z)) > 1e-6)
                    throw std::runtime_error("build_cone: A-characteristic mismatch between "
                                             "the TA and tangency families");
            }
        }
    }

    // straight-characteristic table off the cone's upper edge (zeta = 0):
    // each entry stores slope and phi-intercept, so the above-cone evaluation
    // is a pair of binary searches instead of a nested root solve
    {
        double psi_hi = -std::numeric_limits<double>::infinity();
        double psi_lo = std::numeric_limits<double>::infinity();
        for (const auto& c : cone.curves_) {
            if (c.crossed_front || c.guard_stopped) continue;
            double p = c.psi_at(0.0);
            psi_hi = std::max(psi_hi, p);
            psi_lo = std::min(psi_lo, p);
        }
        psi_lo -= 35.0;  // degenerate tail toward U = 1 (near-vertical lines)
        double a0 = zf.ads().a_z(0.0);
        double scale = std::sqrt(1.0 + a0 * a0);
        const int n_edge = 4096;
        for (int i = 0; i <= n_edge; ++i) {
            ConeSolution::EdgeChar e;
            e.psi = psi_lo + (psi_hi - psi_lo) * i / n_edge;
            e.x_e = std::exp(e.psi) / scale;
            e.U = std::max(cone.eval_cone(0.0, e.psi), 1.0 + 1e-13);
            e.sigma = flux.F_U(e.U, 0.0);
            e.intercept = zf.t_inj() + (a0 - e.sigma) * e.x_e;
            cone.edge_chars_.push_back(e);
        }
    }

    // below-front source table over [x_A, x_factor * x_A]
    {
        double xa = zf.x_A();
        double xmax = xa * opts.below_front_x_factor;
        int n_lin = 129, n_log = 2048;
        std::set<double> xs;
        xs.insert(xa);  // anchor: continuity with U-_OA at A
        for (int i = 1; i <= n_lin; ++i) xs.insert(xa * (1.0 + 0.1 * i / n_lin));
        for (int i = 0; i <= n_log; ++i)
            xs.insert(xa * 1.1 * std::pow(xmax / (xa * 1.1), static_cast<double>(i) / n_log));
        double prev_slope = -std::numeric_limits<double>::infinity();
        for (double x0 : xs) {
            FrontStates fs = cone.front_states_raw(x0);
            double slope = flux.F_U(fs.U_minus, 0.0);
            cone.below_front_table_.push_back({x0, fs.U_minus, slope});
            if (slope < prev_slope - 1e-9) cone.below_front_monotone_ = false;
            prev_slope = slope;
        }
    }

    return cone;
}

bool ConeSolution::f5_holds_at(double z) const {
    size_t k = 0;
    while (k < sign_changes_.size() && sign_changes_[k] <= z) ++k;
    return k % 2 == 0;  // the stretch at zeta -> 0 always holds
}

double ConeSolution::U_front(double z) const {
    for (const auto& iv : jouguet_intervals_)
        if (z <= iv.second && z >= iv.first) return uj_.at(z);
    if (!jouguet_intervals_.empty() && z < jouguet_intervals_.back().first) return uj_.at(z);
    // interpolate the crossing records linearly in zeta
    const auto& tab = crossing_table_;
    if (tab.empty()) return uj_.at(z);
    auto it = std::lower_bound(tab.begin(), tab.end(), std::make_pair(z, -1e300));
    if (it == tab.begin()) return it->second;
    if (it == tab.end()) return tab.back().second;
    auto p = std::prev(it);
    double w = (z - p->first) / (it->first - p->first);
    return p->second + w * (it->second - p->second);
}

namespace {

// monotone piecewise-cubic (Fritsch-Carlson) through up to 4 points with the
// query inside the middle interval [x[i], x[i+1]]
double monotone_cubic(const double* xs, const double* ys, int n, int i, double x) {
    double h = xs[i + 1] - xs[i];
    if (h <= 0.0) return ys[i];
    double d = (ys[i + 1] - ys[i]) / h;
    auto secant = [&](int k) { return (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]); };
    double m0, m1;
    if (i > 0) {
        double dl = secant(i - 1);
        m0 = (dl * d <= 0.0) ? 0.0 : 2.0 * dl * d / (dl + d);
    } else {
        m0 = d;
    }
    if (i + 2 < n) {
        double dr = secant(i + 1);
        m1 = (dr * d <= 0.0) ? 0.0 : 2.0 * dr * d / (dr + d);
    } else {
        m1 = d;
    }
    double u = (x - xs[i]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    return h00 * ys[i] + h10 * h * m0 + h01 * ys[i + 1] + h11 * h * m1;
}

}  // namespace

double ConeSolution::eval_cone(double z, double psi) const {
    z = std::clamp(z, 0.0, 1.0);
    thread_local std::vector<int> idx;
    idx.clear();
    for (size_t i = 0; i < curves_.size(); ++i)
        if (curves_[i].alive_at(z)) idx.push_back(static_cast<int>(i));
    double psi_hi = zf_.psi_front(z);
    double U_hi = U_front(z);
    if (idx.empty() || psi >= psi_hi) return U_hi;

    auto psi_of = [&](int k) { return curves_[idx[k]].psi_at(z); };
    auto U_of = [&](int k) { return curves_[idx[k]].U_at(z); };

    int n = static_cast<int>(idx.size());
    if (psi <= psi_of(0)) {
        // below the lowest curve: decay toward the degenerate member U = 1
        double U_low = U_of(0), psi_low = psi_of(0);
        return 1.0 + (U_low - 1.0) * std::exp(psi - psi_low);
    }
    int lo = 0, hi = n - 1;
    if (psi >= psi_of(hi)) {
        // between the outermost curve and the front boundary; at zeta -> 0 the
        // front recedes to infinity and the outermost value is the limit
        double xs[2] = {psi_of(hi), psi_hi};
        double ys[2] = {U_of(hi), U_hi};
        if (!std::isfinite(xs[1])) return ys[0];
        if (xs[1] - xs[0] < 1e-300) return U_hi;
        return monotone_cubic(xs, ys, 2, 0, std::min(psi, xs[1]));
    }
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (psi_of(mid) <= psi) lo = mid;
        else hi = mid;
    }
    // assemble up to 4 stencil points around [lo, lo+1], front anchor included
    double xs[4], ys[4];
    int count = 0, mid_index = 0;
    if (lo > 0) {
        xs[count] = psi_of(lo - 1);
        ys[count++] = U_of(lo - 1);
    }
    mid_index = count;
    xs[count] = psi_of(lo);
    ys[count++] = U_of(lo);
    xs[count] = psi_of(lo + 1);
    ys[count++] = U_of(lo + 1);
    if (lo + 2 < n) {
        xs[count] = psi_of(lo + 2);
        ys[count++] = U_of(lo + 2);
    } else if (psi_hi > xs[count - 1]) {
        xs[count] = psi_hi;
        ys[count++] = U_hi;
    }
    return monotone_cubic(xs, ys, count, mid_index, psi);
}

double ConeSolution::pencil_value(double sigma) const {
    const FluidModel& fl = flux_.model().fluid;
    double s_hi = flux_.vartheta(U_minus_OA_, 0.0);
    return flux_.U_from_slope(sigma, 0.0, fl.s_welge(0.0), s_hi);
}

double ConeSolution::triangle_value(double sigma) const {
    return flux_.U_from_slope(sigma, 1.0, flux_.model().fluid.s_welge(1.0), 1.0 - 1e-13);
}

double ConeSolution::edge_U(double x_e) const {
    // the cone's upper edge is its zeta = 0 trace
    if (!(x_e > 0.0)) return 1.0;
    double az0 = zf_.ads().a_z(0.0);
    double psi = std::log(x_e) + 0.5 * std::log(1.0 + az0 * az0);
    return eval_cone(0.0, psi);
}

double ConeSolution::above_cone_value(double phi, double x) const {
    // the region is covered by straight characteristics phi = b_e + sigma_e x
    // anchored on the cone's upper edge; at fixed x their values decrease in
    // the anchor position, so two binary searches locate the bracketing pair
    const auto& tab = edge_chars_;
    auto line_phi = [&](const EdgeChar& e) { return e.intercept + e.sigma * x; };
    // anchors must sit at x_e < x
    std::size_t n = std::upper_bound(tab.begin(), tab.end(), x,
                                     [](double v, const EdgeChar& e) { return v < e.x_e; }) -
                    tab.begin();
    if (n == 0) return 1.0;
    if (phi >= line_phi(tab[0])) return tab[0].U;  // beyond the steepest stored line
    // lowest stored line above this x: below it, anchor exactly on the edge
    if (phi <= line_phi(tab[n - 1])) {
        double xs[3], ys[3];
        xs[0] = zf_.fan_top(x);
        ys[0] = edge_U(x);
        xs[1] = line_phi(tab[n - 1]);
        ys[1] = tab[n - 1].U;
        int count = 2;
        if (n >= 2) {
            xs[2] = line_phi(tab[n - 2]);
            ys[2] = tab[n - 2].U;
            count = 3;
        }
        if (xs[1] - xs[0] <= 0.0) return ys[0];
        return monotone_cubic(xs, ys, count, 0, std::max(phi, xs[0]));
    }
    std::size_t lo = 0, hi = n - 1;  // line_phi decreasing over [lo, hi]
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (line_phi(tab[mid]) >= phi) lo = mid;
        else hi = mid;
    }
    // stencil with phi ascending: entries hi+1, hi, lo, lo-1
    double xs[4], ys[4];
    int count = 0, mid_idx = 0;
    if (hi + 1 < n) {
        xs[count] = line_phi(tab[hi + 1]);
        ys[count++] = tab[hi + 1].U;
    }
    mid_idx = count;
    xs[count] = line_phi(tab[hi]);
    ys[count++] = tab[hi].U;
    xs[count] = line_phi(tab[lo]);
    ys[count++] = tab[lo].U;
    if (lo > 0) {
        xs[count] = line_phi(tab[lo - 1]);
        ys[count++] = tab[lo - 1].U;
    }
    return monotone_cubic(xs, ys, count, mid_idx, phi);
}

FrontStates ConeSolution::front_states_raw(double x) const {
    FrontStates out;
    out.zeta_plus = zf_.zeta_front(x);
    out.U_plus = U_front(out.zeta_plus);
    out.v_star = zf_.front_slope(x);
    const FluidModel& fl = flux_.model().fluid;
    double F_plus = flux_.F(out.U_plus, out.zeta_plus);
    auto G = [&](double s) {
        double U = 1.0 / fl.f(s, 0.0);
        return F_plus + s * U - out.v_star * (out.U_plus - U);
    };
    const int n = 2048;
    double best_U = -1.0;
    double prev_s = 1.0 - 1e-9, prev_g = G(prev_s);
    for (int i = 1; i <= n; ++i) {
        double s = (1.0 - 1e-9) * (1.0 - static_cast<double>(i) / (n + 1));
        if (s < 1e-9) break;
        double g = G(s);
        if ((prev_g < 0 && g > 0) || (prev_g > 0 && g < 0)) {
            auto r = find_root(G, std::min(s, prev_s), std::max(s, prev_s), 1e-15);
            best_U = std::max(best_U, 1.0 / fl.f(r.x, 0.0));
        }
        prev_s = s;
        prev_g = g;
    }
    if (best_U <= out.U_plus * (1.0 - 1e-9))
        throw std::runtime_error("below_front_values: no admissible root below the front");
    for (int it = 0; it < 4; ++it) {  // Newton polish in U
        double g = F_plus - flux_.F(best_U, 0.0) - out.v_star * (out.U_plus - best_U);
        double dg = -flux_.F_U(best_U, 0.0) + out.v_star;
        if (dg == 0.0) break;
        best_U -= g / dg;
    }
    out.U_minus = best_U;
    return out;
}

FrontStates ConeSolution::below_front_values(double x) const {
    if (!(x > zf_.x_A()))
        throw std::invalid_argument("below_front_values: needs x > x_A");
    return front_states_raw(x);
}

double ConeSolution::below_front_slope(double x0) const {
    return flux_.F_U(front_states_raw(x0).U_minus, 0.0);
}

namespace {

// monotone-cubic table lookup over the below-front samples
double below_front_table_eval(const std::vector<ConeSolution::BelowFrontSample>& tab, double x0,
                              double ConeSolution::BelowFrontSample::*member) {
    auto it = std::lower_bound(tab.begin(), tab.end(), x0,
                               [](const ConeSolution::BelowFrontSample& s, double v) {
                                   return s.x0 < v;
                               });
    if (it == tab.begin()) return tab.front().*member;
    if (it == tab.end()) return tab.back().*member;
    std::size_t hi = static_cast<std::size_t>(it - tab.begin());
    std::size_t lo = hi - 1;
    double xs[4], ys[4];
    int count = 0, mid = 0;
    if (lo > 0) {
        xs[count] = tab[lo - 1].x0;
        ys[count++] = tab[lo - 1].*member;
    }
    mid = count;
    xs[count] = tab[lo].x0;
    ys[count++] = tab[lo].*member;
    xs[count] = tab[hi].x0;
    ys[count++] = tab[hi].*member;
    if (hi + 1 < tab.size()) {
        xs[count] = tab[hi + 1].x0;
        ys[count++] = tab[hi + 1].*member;
    }
    return monotone_cubic(xs, ys, count, mid, x0);
}

}  // namespace

double ConeSolution::below_front_slope_interp(double x0) const {
    const auto& tab = below_front_table_;
    if (tab.empty() || x0 > tab.back().x0) return below_front_slope(x0);
    return below_front_table_eval(tab, x0, &BelowFrontSample::slope);
}

double ConeSolution::below_front_value(double phi, double x) const {
    if (sigma_OA_ > 0.0 && phi <= sigma_OA_ * x) return pencil_value(phi / x);
    if (x <= zf_.x_A()) return U_minus_OA_;
    double phi_Apar = zf_.phi_A() + sigma_OA_ * (x - zf_.x_A());
    if (phi <= phi_Apar) return U_minus_OA_;
    if (!below_front_monotone_)
        throw std::runtime_error(
            "eval_U: unsupported region (characteristic collision below the curved front; "
            "shock construction there is out of scope)");
    // characteristic launched from the curved front at x0
    auto Lambda = [&](double x0) {
        return zf_.front_phi(x0) + below_front_slope_interp(x0) * (x - x0) - phi;
    };
    double lo = zf_.x_A() * (1.0 + 1e-12), hi = x;
    for (int it = 0; it < 80 && hi - lo > 1e-14 * x; ++it) {
        double mid = 0.5 * (lo + hi);
        if (Lambda(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    double x0 = 0.5 * (lo + hi);
    const auto& tab = below_front_table_;
    if (!tab.empty() && x0 <= tab.back().x0)
        return below_front_table_eval(tab, x0, &BelowFrontSample::U_minus);
    return front_states_raw(x0).U_minus;
}

double ConeSolution::eval_U(double phi, double x) const {
    if (phi < 0.0 || x < 0.0)
        throw std::invalid_argument("eval_U: point outside the closed quadrant");
    if (x < 1e-300) return 1.0;  // inlet column
    double front = zf_.front_at(x);
    if (phi >= front) {
        if (x <= zf_.x_A() && phi < zf_.fan_bottom(x)) return triangle_value(phi / x);
        if (phi >= zf_.fan_top(x)) return above_cone_value(phi, x);
        double z = zf_.eval(phi, x);
        double dphi = phi - zf_.t_inj();
        double psi = 0.5 * std::log(dphi * dphi + x * x);
        return eval_cone(z, psi);
    }
    return below_front_value(phi, x);
}

}  // namespace slugflow
