#include "slugflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "slugflow/admissibility.hpp"
#include "slugflow/ode.hpp"
#include "slugflow/reference_fv.hpp"
#include "slugflow/rootfind.hpp"

namespace slugflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_front_csv(const ZetaField& zf, const std::vector<double>& xs, std::ostream& os) {
    os << "x,phi,zeta,slope\n";
    char buf[200];
    for (double x : xs) {
        if (x < zf.x_A()) continue;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x, zf.front_phi(x),
                      zf.zeta_front(x), zf.front_slope(x));
        os << buf;
    }
}

void write_characteristics_csv(const ConeSolution& cone, std::ostream& os) {
    os << "family,param,zeta,U,psi,phi,x\n";
    const ZetaField& zf = cone.zeta_field();
    char buf[320];
    for (const auto& c : cone.curves()) {
        const char* fam = (c.family == CurveFamily::TA) ? "TA" : "J";
        for (const auto& nd : c.traj.nodes) {
            double phi, x;
            zf.cone_point(std::clamp(nd.t, 0.0, 1.0), nd.y[1], phi, x);
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", fam,
                          c.param, nd.t, nd.y[0], nd.y[1], phi, x);
            os << buf;
        }
    }
}

void write_lagrange_field_csv(const ConeSolution& cone, int nx, int nphi, double x_max,
                              double phi_max, std::ostream& os) {
    os << "phi,x,U,zeta\n";
    const ZetaField& zf = cone.zeta_field();
    char buf[200];
    for (int j = 0; j < nphi; ++j) {
        double phi = (j + 1) * phi_max / nphi;
        for (int i = 0; i < nx; ++i) {
            double x = (i + 0.5) * x_max / nx;
            double U = cone.eval_U(phi, x);
            double z = zf.eval(phi, x);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", phi, x, U, z);
            os << buf;
        }
    }
}

GridField read_grid_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "x,t,s,c")
        throw std::invalid_argument("grid CSV: expected header 'x,t,s,c'");
    std::vector<double> xs, ts, ss, cs;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x, t, s, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &t, &s, &c) != 4)
            throw std::invalid_argument("grid CSV: malformed row '" + line + "'");
        xs.push_back(x);
        ts.push_back(t);
        ss.push_back(s);
        cs.push_back(c);
    }
    if (xs.empty()) throw std::invalid_argument("grid CSV: no data rows");
    GridField gf;
    // rows are t-major: x cycles fastest
    std::size_t nx = 1;
    while (nx < xs.size() && xs[nx] > xs[nx - 1]) ++nx;
    if (xs.size() % nx != 0) throw std::invalid_argument("grid CSV: ragged grid");
    std::size_t nt = xs.size() / nx;
    gf.x.assign(xs.begin(), xs.begin() + nx);
    for (std::size_t j = 0; j < nt; ++j) gf.t.push_back(ts[j * nx]);
    gf.s = std::move(ss);
    gf.c = std::move(cs);
    return gf;
}

double front_position_at_time(const ConeSolution& sol, double t) {
    const ZetaField& zf = sol.zeta_field();
    auto t_front = [&](double x) { return time_of(sol, zf.front_at(x), x, 1e-10); };
    double lo = 1e-9, hi = std::max(zf.x_A(), 1.0);
    while (t_front(hi) < t) hi *= 2.0;
    return find_root([&](double x) { return t_front(x) - t; }, lo, hi, 1e-10 * hi).x;
}

double equal_area_front_position(const GridField& fv, const GridField& ana, double x_hint) {
    // the viscous concentration profile conserves mass, so the front position
    // is where the sharp analytic profile holds the same windowed c-mass
    // (half-height crossings carry an O(eps) asymmetry bias)
    double dx = fv.x[1] - fv.x[0];
    double w = std::max(0.06, 25.0 * dx);
    double mass = 0.0;
    for (std::size_t i = 0; i < fv.nx(); ++i)
        if (std::fabs(fv.x[i] - x_hint) <= w) mass += fv.c_at(i, 0) * dx;
    double acc = 0.0, c_level = 0.0;
    for (std::size_t i = 0; i < ana.nx(); ++i) {
        if (std::fabs(ana.x[i] - x_hint) > w) continue;
        double ci = ana.c_at(i, 0);
        if (ci > 1e-9) c_level = ci;
        else if (c_level > 0.0) ci = c_level;  // shift the sharp front outward
        else continue;
        if (acc + ci * dx >= mass) return ana.x[i] - 0.5 * dx + (mass - acc) / ci;
        acc += ci * dx;
    }
    return x_hint + w;
}

namespace {

struct CheckAccum {
    std::vector<CheckResult>* out;
    void add(const std::string& name, double value, double threshold, const std::string& note = "") {
        out->push_back({name, value <= threshold, value, threshold, note});
    }
    void add_flag(const std::string& name, bool pass, const std::string& note = "") {
        out->push_back({name, pass, pass ? 0.0 : 1.0, 0.0, note});
    }
};

}  // namespace

SolveSummary run_solve(const SolveConfig& cfg_in) {
    SolveSummary summary;
    SolveConfig cfg = cfg_in;
    ModelPair model = cfg.model();
    LagrangeFlux flux(model);
    ZetaField zf = build_zeta(model, cfg.t_inj);

    if (cfg.x_max <= 0.0) cfg.x_max = 3.0 * zf.x_A();
    ConeBuildOptions copts;
    copts.n_ta = cfg.n_ta;
    copts.n_jouguet = cfg.n_jouguet;
    copts.ode_rtol = cfg.ode_rtol;
    copts.below_front_x_factor = std::max(150.0, 1.5 * cfg.x_max / zf.x_A());
    ConeSolution cone = build_cone(model, zf, copts);
    if (cfg.t_max <= 0.0) cfg.t_max = time_of(cone, zf.front_at(0.8 * cfg.x_max), 0.8 * cfg.x_max);
    summary.effective = cfg;

    CheckAccum checks{&summary.checks};

    // model assumptions
    auto rep = validate_assumptions(model, 64);
    checks.add_flag("model-assumptions", rep.all_pass());

    // constants and their defining residuals
    checks.add("u-plus-residual", std::fabs(flux.F_U(cone.U_plus_OA(), 1.0) - zf.v10()), 1e-10);
    double rh2 = flux.F(cone.U_plus_OA(), 1.0) - flux.F(cone.U_minus_OA(), 0.0) -
                 zf.v10() * (cone.U_plus_OA() - cone.U_minus_OA());
    checks.add("u-minus-rh2-residual", std::fabs(rh2), 1e-10);

    // closed-form front vs adaptive integration of its defining equation
    {
        double xa = zf.x_A(), xb = 100.0 * zf.x_A();
        OdeRhs<1> rhs = [&](double x, const OdeState<1>& y, OdeState<1>& dy) {
            double r = (y[0] - zf.t_inj()) / x;
            double z = std::clamp(zf.ads().g(std::max(r, 1e-300)), 1e-14, 1.0);
            dy[0] = zf.ads().chord(z, 0.0);
        };
        OdeOptions oo;
        oo.rtol = 1e-11;
        oo.atol = 1e-13;
        oo.max_step = (xb - xa) / 400.0;
        auto traj = integrate_ode<1>(rhs, xa, {zf.phi_A()}, xb, oo);
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i) {
            double x = xa * std::pow(xb / xa, i / 40.0);
            worst = std::max(worst, std::fabs(traj.eval(x)[0] - zf.front_phi(x)) / zf.front_phi(x));
        }
        checks.add("front-ode-vs-closed-form", worst, 1e-8);
    }

    // convexity and transversality of the curved front
    {
        double worst_conv = 1e300, worst_trans = 1e300;
        double xa = zf.x_A();
        for (int i = 1; i < 200; ++i) {
            double x = xa * std::pow(100.0, i / 200.0);
            double h = 1e-3 * x;
            double d2 = (zf.front_phi(x + h) - 2.0 * zf.front_phi(x) + zf.front_phi(x - h)) / (h * h);
            worst_conv = std::min(worst_conv, d2);
            worst_trans = std::min(worst_trans,
                                   zf.front_slope(x) - (zf.front_phi(x) - zf.t_inj()) / x);
        }
        checks.add_flag("front-convexity", worst_conv > 0.0, "min d2Phi=" + fmt_short(worst_conv));
        checks.add_flag("front-transversality", worst_trans > 0.0,
                        "min margin=" + fmt_short(worst_trans));
    }

    // tangency residuals (vacuously true in the full-tangency regime)
    {
        double worst = 0.0;
        for (const auto& t : cone.tangencies())
            worst = std::max({worst, std::fabs(t.U_residual), std::fabs(t.psi_residual)});
        checks.add("tangency-residuals", worst, 1e-8);
    }

    // front shocks: RH residuals and admissibility verdicts
    {
        double worst_rh = 0.0;
        bool all_ok = true;
        for (int i = 1; i <= 12; ++i) {
            double x = zf.x_A() * std::pow(80.0, i / 12.0);
            auto fs = cone.below_front_values(x);
            LagrangeShock ls{fs.U_minus, fs.U_plus, 0.0, fs.zeta_plus, fs.v_star};
            ShockData sh = map_shock_from_lagrange(model, ls);
            auto [r1, r2] = rh_residual(model, sh);
            worst_rh = std::max({worst_rh, std::fabs(r1), std::fabs(r2)});
            all_ok = all_ok && classify_shock(model, sh).admissible;
        }
        checks.add("front-shock-rh-residual", worst_rh, 1e-8);
        checks.add_flag("front-shock-verdicts", all_ok);
        checks.add_flag("below-front-fan-out", cone.below_front_fan_out_ok());
    }

    // cone coverage smoke test: samples stay under the front boundary and
    // evaluation brackets every point
    {
        double worst = -1e300;
        for (int i = 1; i < 50; ++i) {
            double z = i / 50.0;
            double psi_lo = zf.psi_front(std::min(1.0, z + 0.5 * (1.0 - z))) - 3.0;
            double psi_hi = zf.psi_front(z);
            for (int k = 0; k < 50; ++k) {
                double psi = psi_lo + (psi_hi - psi_lo) * k / 50.0;
                double U = cone.eval_cone(z, psi);
                worst = std::max(worst, std::fabs(U - 1.0) < 0.0 ? 1.0 : 0.0);
                if (!(U >= 1.0 && U <= cone.U_J(z) + 1e-6)) worst = std::max(worst, 1.0);
            }
        }
        checks.add_flag("cone-coverage", worst <= 0.0);
    }

    // artifact bundle
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream os(fs::path(cfg.output_dir) / "zeta_front.csv");
        std::vector<double> xs;
        for (int i = 0; i <= 240; ++i) xs.push_back(zf.x_A() * std::pow(100.0, i / 240.0));
        write_front_csv(zf, xs, os);
    }
    {
        std::ofstream os(fs::path(cfg.output_dir) / "characteristics.csv");
        write_characteristics_csv(cone, os);
    }
    {
        std::ofstream os(fs::path(cfg.output_dir) / "field_lagrange.csv");
        write_lagrange_field_csv(cone, cfg.nx, cfg.nt, cfg.x_max, cfg.t_max, os);
    }
    GridField phys = sample_grid(cone, cfg.nx, cfg.nt, cfg.x_max, cfg.t_max);
    {
        std::ofstream os(fs::path(cfg.output_dir) / "field_physical.csv");
        phys.write_csv(os);
    }

    // optional dissipative-oracle comparison sweep
    if (cfg.fv) {
        double prev_s = 1e300, prev_c = 1e300;
        bool monotone = true;
        double front_err = 0.0, finest_dx = 0.0;
        std::vector<double> eps_sorted = cfg.fv->eps;
        std::sort(eps_sorted.rbegin(), eps_sorted.rend());
        double x_front = front_position_at_time(cone, cfg.fv->t_final);
        for (double eps : eps_sorted) {
            FVConfig fvc;
            fvc.eps = eps;
            fvc.dx = eps * cfg.fv->dx_over_eps;
            fvc.cfl = cfg.fv->cfl;
            fvc.length = cfg.fv->length;
            fvc.t_final = cfg.fv->t_final;
            fvc.t_inj = cfg.t_inj;
            FVResult fv = run_fv(model, fvc);
            GridField ana = sample_grid(cone, static_cast<int>(fv.field.nx()), 1, fvc.length,
                                        fvc.t_final);
            double l1s = compare_fields(fv.field, ana, 's');
            double l1c = compare_fields(fv.field, ana, 'c');
            if (l1s > prev_s || l1c > prev_c) monotone = false;
            prev_s = l1s;
            prev_c = l1c;
            double fv_front = equal_area_front_position(fv.field, ana, x_front);
            front_err = std::fabs(fv_front - x_front);
            finest_dx = fvc.dx;
            summary.fv_rows.push_back({eps, fvc.dx, l1s, l1c, front_err});
        }
        checks.add_flag("fv-l1-monotone", monotone);
        checks.add("fv-front-position-error", front_err, 2.0 * finest_dx);
    }

    // report
    {
        std::ofstream os(fs::path(cfg.output_dir) / "report.txt");
        os << "slug injection semi-analytical solve report\n";
        os << "===========================================\n\n";
        os << "constants:\n";
        os << "  v(1,0)      = " << fmt(zf.v10()) << "\n";
        os << "  x_A         = " << fmt(zf.x_A()) << "\n";
        os << "  phi_A       = " << fmt(zf.phi_A()) << "\n";
        os << "  U_plus_OA   = " << fmt(cone.U_plus_OA()) << "\n";
        os << "  U_minus_OA  = " << fmt(cone.U_minus_OA()) << "\n";
        os << "  sigma_OA    = " << fmt(cone.sigma_OA()) << "\n";
        os << "\nF5 sign changes (zeta):";
        if (cone.f5_sign_changes().empty()) os << " none (full tangency regime)";
        for (double z : cone.f5_sign_changes()) os << " " << fmt(z);
        os << "\ntangency curves:";
        if (cone.tangencies().empty()) os << " none";
        for (const auto& t : cone.tangencies())
            os << " (param=" << fmt(t.param) << ", zeta_touch=" << fmt(t.zeta_touch) << ")";
        os << "\ntangency-condition intervals:";
        for (const auto& iv : cone.jouguet_intervals())
            os << " [" << fmt(iv.first) << ", " << fmt(iv.second) << "]";
        os << "\n\nchecks:\n";
        for (const auto& c : summary.checks) {
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "  value="
               << fmt_short(c.value) << " threshold=" << fmt_short(c.threshold);
            if (!c.note.empty()) os << "  (" << c.note << ")";
            os << "\n";
        }
        if (!summary.fv_rows.empty()) {
            os << "\ndissipative-oracle comparison (L1 vs eps):\n";
            os << "  eps,dx,L1_s,L1_c,front_error\n";
            for (const auto& r : summary.fv_rows)
                os << "  " << fmt_short(r.eps) << "," << fmt_short(r.dx) << ","
                   << fmt_short(r.l1_s) << "," << fmt_short(r.l1_c) << ","
                   << fmt_short(r.front_error) << "\n";
        }
        os << "\neffective config:\n" << cfg.to_json();
    }

    for (const auto& c : summary.checks)
        if (!c.pass && summary.first_failure.empty()) summary.first_failure = c.name;
    return summary;
}

}  // namespace slugflow
