#include "slugflow/reference_fv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace slugflow {

double recover_c(const AdsorptionModel& ads, double s, double m) {
    if (m <= 0.0) return 0.0;
    double G = ads.Gamma, B = ads.beta;
    double c;
    if (s <= 1e-12) {
        // degenerate limit of the m-to-c map: a(c) = m alone
        c = (m >= ads.a(1.0)) ? 1.0 : m / (B * (G - m));
    } else {
        // positive root of  B s c^2 + (s + G B - m B) c - m = 0 (monotone branch)
        double b = s + G * B - m * B;
        double disc = b * b + 4.0 * B * s * m;
        c = (-b + std::sqrt(disc)) / (2.0 * B * s);
        // one Newton polish on g(c) = c s + a(c) - m
        double g = c * s + ads.a(c) - m;
        double dg = s + ads.a_z(std::clamp(c, 0.0, 1.0));
        if (dg > 0.0) c -= g / dg;
    }
    if (!std::isfinite(c) || c < -1e-6 || c > 1.0 + 1e-6)
        throw std::runtime_error("recover_c: root left [0,1]");
    return std::clamp(c, 0.0, 1.0);
}

FVResult run_fv(const ModelPair& model, const FVConfig& cfg) {
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("run_fv: eps must be positive");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.4))
        throw std::invalid_argument("run_fv: CFL number must lie in (0, 0.4]");
    if (!(cfg.dx > 0.0 && cfg.length > cfg.dx))
        throw std::invalid_argument("run_fv: invalid grid");

    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ads = model.ads;
    const int n = static_cast<int>(std::lround(cfg.length / cfg.dx));
    const double dx = cfg.length / n;

    // global characteristic-speed bound for the time step
    double max_fs = 0.0;
    for (int i = 1; i < 256; ++i)
        for (int j = 0; j <= 8; ++j)
            max_fs = std::max(max_fs, fl.f_s(i / 256.0, j / 8.0));
    double dt = cfg.cfl / (max_fs / dx + 2.0 * cfg.eps / (dx * dx));

    std::vector<double> s(n, cfg.s_init), c(n, 0.0), m(n);
    for (int k = 0; k < n; ++k) m[k] = c[k] * s[k] + ads.a(c[k]);

    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    auto local_speed = [&](double sv, double cv) {
        double sc = clamp01(sv), cc = clamp01(cv);
        double cw = fl.f(sc, cc) / (sc + ads.a_z(cc));  // c-family coupling bound
        return std::fabs(fl.f_s(sc, cc)) + cw;
    };

    double init_total_s = 0.0, init_total_m = 0.0;
    for (int k = 0; k < n; ++k) {
        init_total_s += s[k];
        init_total_m += m[k];
    }
    init_total_s *= dx;
    init_total_m *= dx;
    double in_s = 0.0, out_s = 0.0, in_m = 0.0, out_m = 0.0;

    std::vector<double> Gs(n + 1), Gm(n + 1);
    double t = 0.0;
    long steps = 0;
    while (t < cfg.t_final - 1e-14) {
        double step = std::min(dt, cfg.t_final - t);
        // ghost states
        double s_in = cfg.s_inlet;
        double c_in = (t <= cfg.t_inj) ? cfg.c_inj : 0.0;
        double m_in = c_in * s_in + ads.a(c_in);
        double s_out = s[n - 1], c_out = c[n - 1], m_out = m[n - 1];

        for (int e = 0; e <= n; ++e) {
            double sl = (e == 0) ? s_in : s[e - 1];
            double cl = (e == 0) ? c_in : c[e - 1];
            double ml = (e == 0) ? m_in : m[e - 1];
            double sr = (e == n) ? s_out : s[e];
            double cr = (e == n) ? c_out : c[e];
            double mr = (e == n) ? m_out : m[e];
            double fL = fl.f(clamp01(sl), clamp01(cl));
            double fR = fl.f(clamp01(sr), clamp01(cr));
            double alpha = std::max(local_speed(sl, cl), local_speed(sr, cr));
            double conv_s = 0.5 * (fL + fR) - 0.5 * alpha * (sr - sl);
            double conv_m = 0.5 * (clamp01(cl) * fL + clamp01(cr) * fR) - 0.5 * alpha * (mr - ml);
            // dissipative interface fluxes (conservation form)
            double sx = (sr - sl) / dx;
            double cx = (cr - cl) / dx;
            double c_int = 0.5 * (cl + cr);
            Gs[e] = conv_s - cfg.eps * sx;
            Gm[e] = conv_m - cfg.eps * (c_int * sx + cx);
        }
        double lam = step / dx;
        for (int k = 0; k < n; ++k) {
            s[k] -= lam * (Gs[k + 1] - Gs[k]);
            m[k] -= lam * (Gm[k + 1] - Gm[k]);
            c[k] = recover_c(ads, s[k], m[k]);
        }
        in_s += Gs[0] * step;
        out_s += Gs[n] * step;
        in_m += Gm[0] * step;
        out_m += Gm[n] * step;
        t += step;
        ++steps;
    }

    double total_s = 0.0, total_m = 0.0;
    for (int k = 0; k < n; ++k) {
        total_s += s[k];
        total_m += m[k];
    }
    total_s *= dx;
    total_m *= dx;

    FVResult res;
    res.steps = steps;
    res.mass_error_s = std::fabs(total_s - (init_total_s + in_s - out_s));
    res.mass_error_m = std::fabs(total_m - (init_total_m + in_m - out_m));
    GridField& gf = res.field;
    gf.M0 = fl.M0;
    gf.m = fl.m;
    gf.Gamma = ads.Gamma;
    gf.beta = ads.beta;
    gf.t_inj = cfg.t_inj;
    gf.x.resize(n);
    for (int k = 0; k < n; ++k) gf.x[k] = (k + 0.5) * dx;
    gf.t = {cfg.t_final};
    gf.s = s;
    gf.c = c;
    return res;
}

}  // namespace slugflow
