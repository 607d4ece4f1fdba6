#include "slugflow/inverse_transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "slugflow/quadrature.hpp"
#include "slugflow/rootfind.hpp"

namespace slugflow {

void GridField::write_csv(std::ostream& os) const {
    os << "x,t,s,c\n";
    char buf[160];
    for (std::size_t j = 0; j < nt(); ++j) {
        for (std::size_t i = 0; i < nx(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[i], t[j], s_at(i, j),
                          c_at(i, j));
            os << buf;
        }
    }
}

namespace {

// abscissas where the horizontal line phi = const crosses region boundaries
std::vector<double> region_splits(const ConeSolution& sol, double phi, double x) {
    const ZetaField& zf = sol.zeta_field();
    std::vector<double> splits;
    auto add = [&](double xs) {
        if (xs > 0.0 && xs < x) splits.push_back(xs);
    };
    double v10 = zf.v10();
    if (phi <= zf.phi_A()) {
        add(phi / v10);  // straight front
    } else if (x > zf.x_A()) {
        // curved front: Phi is increasing; bracket geometrically then bisect
        double lo = zf.x_A(), hi = std::min(2.0 * zf.x_A(), x);
        while (hi < x && zf.front_phi(hi) < phi) hi = std::min(2.0 * hi, x);
        auto g = [&](double xx) { return zf.front_phi(xx) - phi; };
        if (g(lo) < 0.0 && g(hi) > 0.0) add(find_root(g, lo, hi, 1e-13 * (1.0 + hi)).x);
    }
    double tinj = zf.t_inj();
    if (phi > tinj) {
        add((phi - tinj) / zf.ads().a_z(1.0));  // TA line (kink only)
        add((phi - tinj) / zf.ads().a_z(0.0));  // fan top (kink only)
    }
    double sigma = sol.sigma_OA();
    if (sigma > 0.0) add(phi / sigma);  // pencil edge below the front
    if (sigma != 0.0) add(zf.x_A() + (phi - zf.phi_A()) / sigma);  // A-parallel
    return splits;
}

}  // namespace

double time_of(const ConeSolution& sol, double phi, double x, double tol) {
    if (phi < 0.0 || x < 0.0) throw std::invalid_argument("time_of: outside the quadrant");
    if (x == 0.0) return phi;  // inlet identity (s = 1, f = 1)
    const LagrangeFlux& flux = sol.flux();
    const ZetaField& zf = sol.zeta_field();
    auto integrand = [&](double xp) {
        if (xp <= 0.0) return 1.0;  // U -> 1, s -> 1 at the inlet
        double U = sol.eval_U(phi, xp);
        double z = zf.eval(phi, xp);
        return flux.vartheta(U, z) * U;  // s/f = -F
    };
    double integral = adaptive_simpson_split(integrand, 0.0, x, region_splits(sol, phi, x),
                                             tol * std::max(1.0, x));
    return phi + integral;
}

double t0_curve(const ConeSolution& sol, double x) { return time_of(sol, 0.0, x); }

double phi_from_time(const ConeSolution& sol, double x, double t, double bracket_lo,
                     double tol) {
    double lo = std::max(0.0, bracket_lo), hi = t;
    double t_lo = time_of(sol, lo, x, tol);
    if (t < t_lo - 1e-9)
        throw std::invalid_argument("phi_from_time: t below t0(x) (zero-saturation region)");
    if (t <= t_lo) return lo;
    // safeguarded Newton on t(phi) - t with dt/dphi = U(phi, x) >= 1
    double phi = std::min(hi, std::max(lo, t - (t_lo - lo)));
    for (int it = 0; it < 100; ++it) {
        double f = time_of(sol, phi, x, tol) - t;
        if (f > 0.0) hi = phi;
        else lo = phi;
        if (std::fabs(f) < 5.0 * tol * std::max(1.0, t) || hi - lo < 1e-13 * std::max(1.0, t))
            return phi;
        double U = sol.eval_U(phi, x);
        double cand = phi - f / U;
        phi = (cand > lo && cand < hi) ? cand : 0.5 * (lo + hi);
    }
    return phi;
}

GridField sample_grid(const ConeSolution& sol, int nx, int nt, double x_max, double t_max) {
    if (nx <= 0 || nt <= 0 || !(x_max > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("sample_grid: positive sizes and extents required");
    GridField gf;
    const ModelPair& mp = sol.flux().model();
    gf.M0 = mp.fluid.M0;
    gf.m = mp.fluid.m;
    gf.Gamma = mp.ads.Gamma;
    gf.beta = mp.ads.beta;
    gf.t_inj = sol.zeta_field().t_inj();
    gf.x.resize(nx);
    gf.t.resize(nt);
    for (int i = 0; i < nx; ++i) gf.x[i] = (i + 0.5) * x_max / nx;
    for (int j = 0; j < nt; ++j) gf.t[j] = (j + 1) * t_max / nt;
    gf.s.assign(static_cast<std::size_t>(nx) * nt, 0.0);
    gf.c.assign(static_cast<std::size_t>(nx) * nt, 0.0);

    const LagrangeFlux& flux = sol.flux();
    const ZetaField& zf = sol.zeta_field();
    const double tol = 3e-9;
    for (int i = 0; i < nx; ++i) {
        double xi = gf.x[i];
        double t0 = time_of(sol, 0.0, xi, tol);
        double phi_prev = 0.0;
        for (int j = 0; j < nt; ++j) {
            double tj = gf.t[j];
            if (tj < t0) continue;  // zero-saturation region: (0,0)
            double phi = phi_from_time(sol, xi, tj, phi_prev, tol);
            phi_prev = phi;
            double U = sol.eval_U(phi, xi);
            double z = zf.eval(phi, xi);
            gf.s[static_cast<std::size_t>(j) * nx + i] = flux.vartheta(U, z);
            gf.c[static_cast<std::size_t>(j) * nx + i] = z;
        }
    }
    return gf;
}

double compare_fields(const GridField& a, const GridField& b, char which) {
    if (a.nx() != b.nx() || a.nt() != b.nt())
        throw std::invalid_argument("compare_fields: grid mismatch");
    for (std::size_t i = 0; i < a.nx(); ++i)
        if (std::fabs(a.x[i] - b.x[i]) > 1e-9)
            throw std::invalid_argument("compare_fields: x-grid mismatch");
    for (std::size_t j = 0; j < a.nt(); ++j)
        if (std::fabs(a.t[j] - b.t[j]) > 1e-9)
            throw std::invalid_argument("compare_fields: t-grid mismatch");
    const std::vector<double>& fa = (which == 's') ? a.s : a.c;
    const std::vector<double>& fb = (which == 's') ? b.s : b.c;
    double dx = (a.nx() > 1) ? a.x[1] - a.x[0] : 1.0;
    double dt = (a.nt() > 1) ? a.t[1] - a.t[0] : 1.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < fa.size(); ++k) sum += std::fabs(fa[k] - fb[k]);
    return sum * dx * dt;
}

}  // namespace slugflow
