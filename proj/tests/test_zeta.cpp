#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "slugflow/model.hpp"
#include "slugflow/ode.hpp"
#include "slugflow/zeta_solution.hpp"

using namespace slugflow;

TEST_CASE("zeta field constants for the reference model") {
    ModelPair mp = default_model();
    // a(1) = 1, a_z(1) = 1/2: v(1,0) = 1, x_A = t_inj / (1 - 1/2)
    ZetaField zf = build_zeta(mp, 1.0);
    CHECK(std::fabs(zf.v10() - 1.0) < 1e-14);
    CHECK(std::fabs(zf.x_A() - 2.0) < 1e-12);
    CHECK(std::fabs(zf.phi_A() - 2.0) < 1e-12);
    CHECK(std::fabs(zf.x_A() * mp.ads.p(1.0) - 1.0) < 1e-12);  // x_A p(1) = t_inj

    ZetaField zf2 = build_zeta(mp, 2.0);
    CHECK(std::fabs(zf2.x_A() - 4.0) < 1e-12);
    CHECK(std::fabs(zf2.phi_A() - 4.0) < 1e-12);

    CHECK_THROWS_AS(build_zeta(mp, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_zeta(mp, -1.0), std::invalid_argument);
}

TEST_CASE("curved front: closed-form values and continuity at A") {
    ZetaField zf = build_zeta(default_model(), 1.0);
    // q(1/8) = 1/3 for p(z) = 2 z^2/(1+z)^2
    CHECK(std::fabs(zf.zeta_front(8.0) - 1.0 / 3.0) < 1e-13);
    CHECK(std::fabs(zf.front_phi(8.0) - 10.0) < 1e-12);
    CHECK(std::fabs(zf.front_slope(8.0) - 1.5) < 1e-12);
    // continuity and slope match at A
    CHECK(std::fabs(zf.front_phi(zf.x_A()) - zf.phi_A()) < 1e-10);
    CHECK(std::fabs(zf.front_slope(zf.x_A()) - zf.v10()) < 1e-10);
    CHECK_THROWS_AS(zf.front_phi(1.0), std::invalid_argument);
}

TEST_CASE("front ODE integration matches the closed form") {
    ModelPair mp = default_model();
    ZetaField zf = build_zeta(mp, 1.0);
    const AdsorptionModel& ads = mp.ads;
    double xa = zf.x_A(), xb = 100.0 * zf.x_A();
    OdeRhs<1> rhs = [&](double x, const OdeState<1>& y, OdeState<1>& dy) {
        double r = (y[0] - zf.t_inj()) / x;
        double z = std::clamp(ads.g(std::max(r, 1e-300)), 1e-14, 1.0);
        dy[0] = ads.chord(z, 0.0);
    };
    OdeOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-13;
    opts.max_step = (xb - xa) / 400.0;
    auto traj = integrate_ode<1>(rhs, xa, {zf.phi_A()}, xb, opts);
    REQUIRE(traj.status == OdeStatus::Completed);
    for (int i = 0; i <= 60; ++i) {
        double x = xa * std::pow(xb / xa, i / 60.0);
        double ode_phi = traj.eval(x)[0];
        double closed = zf.front_phi(x);
        CHECK(std::fabs(ode_phi - closed) / closed < 1e-8);
    }
}

TEST_CASE("front convexity and transversality") {
    ZetaField zf = build_zeta(default_model(), 1.0);
    double xa = zf.x_A();
    std::vector<double> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back(xa * std::pow(100.0, i / 200.0));
    for (size_t i = 1; i + 1 < xs.size(); ++i) {
        double h1 = xs[i] - xs[i - 1], h2 = xs[i + 1] - xs[i];
        double d2 = 2.0 * (h1 * zf.front_phi(xs[i + 1]) - (h1 + h2) * zf.front_phi(xs[i]) +
                           h2 * zf.front_phi(xs[i - 1])) /
                    (h1 * h2 * (h1 + h2));
        CHECK(d2 > 0.0);
    }
    for (double x : xs) {
        CHECK(zf.front_slope(x) - (zf.front_phi(x) - zf.t_inj()) / x > 0.0);
        // slope always exceeds v(1,0) past A
        if (x > xa * 1.0001) CHECK(zf.front_slope(x) > zf.v10());
    }
}

TEST_CASE("Rankine-Hugoniot identity on the curved front") {
    ModelPair mp = default_model();
    ZetaField zf = build_zeta(mp, 1.0);
    for (double x : {2.0, 3.0, 8.0, 40.0, 150.0}) {
        double z = zf.zeta_front(x);
        // speed [a]/[zeta] with lower state 0 is exactly a(z)/z
        CHECK(std::fabs(zf.front_slope(x) - mp.ads.chord(z, 0.0)) < 1e-14);
    }
}

TEST_CASE("point evaluation: regions and boundary conventions") {
    ZetaField zf = build_zeta(default_model(), 1.0);
    CHECK(zf.eval(1.2, 1.0) == 1.0);                         // slug body
    CHECK(std::fabs(zf.eval(10.0 + 1e-9, 8.0) - 1.0 / 3.0) < 1e-9);  // just above Phi
    CHECK(zf.eval(0.5, 1.0) == 0.0);                         // ahead of the slug
    CHECK(zf.eval(1.0 * 1.0, 1.0) == 1.0);                   // on OA: upper side
    CHECK(std::fabs(zf.eval(zf.front_phi(8.0), 8.0) - 1.0 / 3.0) < 1e-12);  // on Phi: upper side
    CHECK(zf.eval(zf.fan_top(3.0), 3.0) == 0.0);             // fan top carries 0
    CHECK(zf.eval(zf.fan_top(3.0) + 2.0, 3.0) == 0.0);       // above the fan
    // inside the fan the value interpolates monotonically in phi
    double lo = zf.eval(zf.fan_bottom(1.5) + 1e-9, 1.5);
    double mid = zf.eval(0.5 * (zf.fan_bottom(1.5) + zf.fan_top(1.5)), 1.5);
    double hi = zf.eval(zf.fan_top(1.5) - 1e-9, 1.5);
    CHECK(lo > mid);
    CHECK(mid > hi);
    // inlet column
    CHECK(zf.eval(0.5, 0.0) == 1.0);
    CHECK(zf.eval(1.5, 0.0) == 0.0);
}

TEST_CASE("closed-form q agrees with the bracketed fallback") {
    AdsorptionModel ads(2.0, 1.0);
    for (int i = 1; i <= 40; ++i) {
        double y = ads.p(1.0) * i / 40.0;
        CHECK(std::fabs(ads.q(y) - ads.q_bracketed(y)) < 1e-12);
    }
    AdsorptionModel ads2(0.7, 3.3);
    for (int i = 1; i <= 40; ++i) {
        double y = ads2.p(1.0) * i / 40.0;
        CHECK(std::fabs(ads2.q(y) - ads2.q_bracketed(y)) < 1e-12);
    }
}

TEST_CASE("psi_front and cone_point invert each other on the front") {
    ZetaField zf = build_zeta(default_model(), 1.0);
    for (double x : {2.0, 5.0, 8.0, 33.0}) {
        double z = zf.zeta_front(x);
        double psi = zf.psi_front(z);
        double phi_expect = zf.front_phi(x);
        double psi_direct = 0.5 * std::log((phi_expect - zf.t_inj()) * (phi_expect - zf.t_inj()) + x * x);
        CHECK(std::fabs(psi - psi_direct) < 1e-12);
        double phi, xx;
        zf.cone_point(z, psi, phi, xx);
        CHECK(std::fabs(xx - x) < 1e-10 * x);
        CHECK(std::fabs(phi - phi_expect) < 1e-10 * phi_expect);
    }
}
