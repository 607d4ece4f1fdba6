#include "slugflow/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slugflow/rootfind.hpp"

namespace slugflow {

FluidModel::FluidModel(double M0_, double m_) : M0(M0_), m(m_) {
    if (!(M0 > 0.0)) throw std::invalid_argument("FluidModel: M0 must be positive");
    if (!(m >= 0.0)) throw std::invalid_argument("FluidModel: m must be nonnegative");
}

double FluidModel::f(double s, double c) const {
    double M = mobility(c);
    double w = 1.0 - s;
    double D = s * s + M * w * w;
    return s * s / D;
}

double FluidModel::f_s(double s, double c) const {
    double M = mobility(c);
    double w = 1.0 - s;
    double D = s * s + M * w * w;
    return 2.0 * M * s * w / (D * D);
}

double FluidModel::f_c(double s, double c) const {
    double M = mobility(c);
    double w = 1.0 - s;
    double D = s * s + M * w * w;
    return -mobility_c() * s * s * w * w / (D * D);
}

double FluidModel::f_ss(double s, double c) const {
    double M = mobility(c);
    double w = 1.0 - s;
    double D = s * s + M * w * w;
    double num = M * w * w * (1.0 + 2.0 * s) - s * s * (3.0 - 2.0 * s);
    return 2.0 * M * num / (D * D * D);
}

double FluidModel::f_sc(double s, double c) const {
    double M = mobility(c);
    double w = 1.0 - s;
    double D = s * s + M * w * w;
    return 2.0 * s * w * mobility_c() * (s * s - M * w * w) / (D * D * D);
}

double FluidModel::s_inflection(double c) const {
    double M = mobility(c);
    auto h = [M](double s) {
        double w = 1.0 - s;
        return M * w * w * (1.0 + 2.0 * s) - s * s * (3.0 - 2.0 * s);
    };
    auto dh = [M](double s) { return -6.0 * s * (1.0 - s) * (M + 1.0); };
    std::function<double(double)> dhf = dh;
    return find_root(h, 0.0, 1.0, 1e-14, 200, &dhf).x;
}

double FluidModel::s_welge(double c) const {
    double M = mobility(c);
    return std::sqrt(M / (1.0 + M));
}

AdsorptionModel::AdsorptionModel(double Gamma_, double beta_) : Gamma(Gamma_), beta(beta_) {
    if (!(Gamma > 0.0)) throw std::invalid_argument("AdsorptionModel: Gamma must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("AdsorptionModel: beta must be positive");
}

double AdsorptionModel::a(double z) const { return Gamma * beta * z / (1.0 + beta * z); }

double AdsorptionModel::a_z(double z) const {
    double d = 1.0 + beta * z;
    return Gamma * beta / (d * d);
}

double AdsorptionModel::a_zz(double z) const {
    double d = 1.0 + beta * z;
    return -2.0 * Gamma * beta * beta / (d * d * d);
}

double AdsorptionModel::g(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("AdsorptionModel::g: slope must be positive");
    return (std::sqrt(Gamma * beta / r) - 1.0) / beta;
}

double AdsorptionModel::p(double z) const {
    double d = 1.0 + beta * z;
    return Gamma * beta * beta * z * z / (d * d);
}

double AdsorptionModel::q(double y) const {
    if (!(y >= 0.0)) throw std::invalid_argument("AdsorptionModel::q: argument must be >= 0");
    double ry = std::sqrt(y), rg = std::sqrt(Gamma);
    if (!(ry < rg)) throw std::invalid_argument("AdsorptionModel::q: argument out of range");
    return ry / (beta * (rg - ry));
}

double AdsorptionModel::q_bracketed(double y) const {
    if (!(y >= 0.0)) throw std::invalid_argument("AdsorptionModel::q_bracketed: argument must be >= 0");
    if (y == 0.0) return 0.0;
    // p is strictly increasing (p' = -z a_zz > 0); widen the bracket past z = 1 if needed
    double hi = 1.0;
    while (p(hi) < y) {
        hi *= 2.0;
        if (hi > 1e12) throw std::invalid_argument("AdsorptionModel::q_bracketed: argument out of range");
    }
    return find_root([this, y](double z) { return p(z) - y; }, 0.0, hi, 1e-14).x;
}

double AdsorptionModel::b(double z) const {
    double d = 1.0 + beta * z;
    return Gamma * beta * beta * z / (d * d);
}

double AdsorptionModel::b_over_zeta(double z) const {
    double d = 1.0 + beta * z;
    return Gamma * beta * beta / (d * d);
}

double AdsorptionModel::chord(double z1, double z2) const {
    if (z1 == z2) return a_z(z1);
    return (a(z1) - a(z2)) / (z1 - z2);
}

ModelPair default_model() { return ModelPair{FluidModel(1.0, 1.0), AdsorptionModel(2.0, 1.0)}; }

bool AssumptionReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string AssumptionReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << c.id << " " << (c.pass ? "PASS" : "FAIL") << "  margin=" << c.worst_value
           << "  at (s=" << c.worst_s << ", c=" << c.worst_c << ")  " << c.detail << "\n";
    }
    return os.str();
}

namespace {

// track the minimum of a signed margin (margin > 0 means the inequality holds)
struct MarginTracker {
    double worst = std::numeric_limits<double>::infinity();
    double s = 0.0, c = 0.0;
    void update(double value, double s_, double c_) {
        if (value < worst) {
            worst = value;
            s = s_;
            c = c_;
        }
    }
};

}  // namespace

AssumptionReport validate_assumptions(const ModelPair& model, int n) {
    if (n < 16) throw std::invalid_argument("validate_assumptions: n must be >= 16");
    const FluidModel& fl = model.fluid;
    const AdsorptionModel& ad = model.ads;
    AssumptionReport rep;
    auto grid = [n](int i) { return static_cast<double>(i) / n; };

    {  // F1: boundary values of f
        MarginTracker t;
        for (int j = 0; j <= n; ++j) {
            double c = grid(j);
            t.update(1e-13 - std::fabs(fl.f(0.0, c)), 0.0, c);
            t.update(1e-13 - std::fabs(fl.f(1.0, c) - 1.0), 1.0, c);
        }
        rep.checks.push_back({"F1", "f(0,c)=0 and f(1,c)=1", t.worst >= 0.0, t.worst, t.s, t.c});
    }
    {  // F2: monotone in s, flat at the endpoints
        MarginTracker t;
        for (int j = 0; j <= n; ++j) {
            double c = grid(j);
            for (int i = 1; i < n; ++i) t.update(fl.f_s(grid(i), c), grid(i), c);
            t.update(1e-13 - std::fabs(fl.f_s(0.0, c)), 0.0, c);
            t.update(1e-13 - std::fabs(fl.f_s(1.0, c)), 1.0, c);
        }
        rep.checks.push_back({"F2", "f_s>0 inside, f_s(0)=f_s(1)=0", t.worst >= 0.0, t.worst, t.s, t.c});
    }
    {  // F3: exactly one inflection per c-line, convex then concave
        MarginTracker t;
        bool pattern_ok = true;
        double bad_c = 0.0;
        for (int j = 0; j <= n; ++j) {
            double c = grid(j);
            double sI = fl.s_inflection(c);
            int flips = 0, last_sign = 0;
            for (int i = 1; i < n; ++i) {
                double v = fl.f_ss(grid(i), c);
                int sgn = (v > 0.0) - (v < 0.0);
                if (sgn != 0) {
                    if (last_sign != 0 && sgn != last_sign) ++flips;
                    last_sign = sgn;
                }
            }
            if (flips != 1) {
                pattern_ok = false;
                bad_c = c;
            }
            // sign agrees with the located inflection
            for (int i = 1; i < n; ++i) {
                double s = grid(i);
                if (std::fabs(s - sI) < 1.0 / n) continue;
                double margin = (s < sI) ? fl.f_ss(s, c) : -fl.f_ss(s, c);
                t.update(margin, s, c);
            }
        }
        bool pass = pattern_ok && t.worst >= 0.0;
        rep.checks.push_back({"F3", "unique inflection, f_ss>0 below / <0 above", pass,
                              pattern_ok ? t.worst : -1.0, t.s, pattern_ok ? t.c : bad_c});
    }
    {  // F4: strictly decreasing in c
        MarginTracker t;
        for (int j = 0; j <= n; ++j) {
            double c = grid(j);
            for (int i = 1; i < n; ++i) t.update(-fl.f_c(grid(i), c), grid(i), c);
        }
        rep.checks.push_back({"F4", "f_c<0 on (0,1)^2", t.worst > 0.0, t.worst, t.s, t.c});
    }
    {  // A1
        double v = std::fabs(ad.a(0.0));
        rep.checks.push_back({"A1", "a(0)=0", v <= 1e-14, 1e-14 - v, 0.0, 0.0});
    }
    {  // A2
        MarginTracker t;
        for (int j = 0; j <= n; ++j) t.update(ad.a_z(grid(j)), 0.0, grid(j));
        rep.checks.push_back({"A2", "a_zeta>0 on [0,1]", t.worst > 0.0, t.worst, 0.0, t.c});
    }
    {  // A3
        MarginTracker t;
        for (int j = 0; j <= n; ++j) t.update(-ad.a_zz(grid(j)), 0.0, grid(j));
        rep.checks.push_back({"A3", "a_zetazeta<0 on [0,1]", t.worst > 0.0, t.worst, 0.0, t.c});
    }
    return rep;
}

double LagrangeFlux::theta(double s, double z) const {
    double fv = model_.fluid.f(s, z);
    if (!(fv > 0.0)) throw std::invalid_argument("LagrangeFlux::theta: f(s,z) must be positive");
    return 1.0 / fv;
}

double LagrangeFlux::vartheta(double U, double z) const {
    if (!(U >= 1.0)) throw std::invalid_argument("LagrangeFlux::vartheta: U must be >= 1");
    if (U == 1.0) return 1.0;
    double target = (U > U_cap) ? 1e-8 : 1.0 / U;
    const FluidModel& fl = model_.fluid;
    // f is strictly increasing in s: bracketed Newton, bisection fallback
    double lo = 0.0, hi = 1.0, s = 0.7;
    for (int it = 0; it < 100; ++it) {
        double r = fl.f(s, z) - target;
        if (r > 0.0) hi = s;
        else lo = s;
        double d = fl.f_s(s, z);
        double sn = (d > 0.0) ? s - r / d : -1.0;
        if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
        double step = std::fabs(sn - s);
        s = sn;
        if (step < 1e-17 || hi - lo < 1e-16) break;
    }
    return s;
}

double LagrangeFlux::F(double U, double z) const {
    if (U == 1.0) return -1.0;
    return -vartheta(U, z) * U;
}

FluxDerivs LagrangeFlux::derivs(double U, double z) const {
    if (!(U > 1.0))
        throw std::invalid_argument("LagrangeFlux::derivs: partials need U > 1");
    const FluidModel& fl = model_.fluid;
    double s = vartheta(U, z);
    double f = fl.f(s, z);
    double fs = fl.f_s(s, z);
    double fc = fl.f_c(s, z);
    double fss = fl.f_ss(s, z);
    double fsc = fl.f_sc(s, z);
    FluxDerivs d;
    d.F = -s * U;
    d.F_U = f / fs - s;
    d.F_z = U * fc / fs;
    d.F_UU = f * f * f * fss / (fs * fs * fs);
    d.F_Uz = (f * fss * fc - f * fsc * fs + fc * fs * fs) / (fs * fs * fs);
    return d;
}

double LagrangeFlux::F_U_of_s(double s, double z) const {
    const FluidModel& fl = model_.fluid;
    return fl.f(s, z) / fl.f_s(s, z) - s;
}

double LagrangeFlux::U_max(double z) const { return theta(model_.fluid.s_welge(z), z); }

double LagrangeFlux::U_inflect(double z) const { return theta(model_.fluid.s_inflection(z), z); }

double LagrangeFlux::U_from_slope(double sigma, double z, double s_lo, double s_hi) const {
    auto h = [&](double s) { return F_U_of_s(s, z) - sigma; };
    // F_U_of_s is increasing in s above the Welge point; clamp huge slopes
    double top = h(s_hi);
    if (top <= 0.0) return theta(s_hi, z);
    double bot = h(s_lo);
    if (bot >= 0.0) return theta(s_lo, z);
    RootResult r = find_root(h, s_lo, s_hi, 1e-14);
    return theta(r.x, z);
}

}  // namespace slugflow
