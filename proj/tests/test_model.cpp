#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "slugflow/model.hpp"

using namespace slugflow;

namespace {
double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max({1.0, std::fabs(got), std::fabs(want)});
}
}  // namespace

TEST_CASE("assumption validation: reference model passes, degenerate ones fail") {
    auto rep = validate_assumptions(default_model(), 64);
    INFO(rep.to_string());
    CHECK(rep.all_pass());

    // m = 0 makes f independent of c: (F4) must fail, everything else passes
    ModelPair flat{FluidModel(1.0, 0.0), AdsorptionModel(2.0, 1.0)};
    auto rep2 = validate_assumptions(flat, 64);
    CHECK_FALSE(rep2.all_pass());
    for (const auto& c : rep2.checks) {
        if (c.id == "F4") CHECK_FALSE(c.pass);
        else CHECK(c.pass);
    }

    CHECK_THROWS_AS(validate_assumptions(default_model(), 8), std::invalid_argument);
}

TEST_CASE("convex adsorption rejected at construction") {
    CHECK_THROWS_AS(AdsorptionModel(2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdsorptionModel(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FluidModel(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("vartheta: hand-evaluated Corey inversions") {
    LagrangeFlux flux(default_model());
    // f(0.5, 0) = 0.25/0.5 = 0.5, hence U = 2 at zeta = 0 maps to s = 0.5
    CHECK(std::fabs(flux.vartheta(2.0, 0.0) - 0.5) < 1e-12);
    // f(0.5, 1) = 0.25/0.75 = 1/3, hence U = 3 at zeta = 1 maps to s = 0.5
    CHECK(std::fabs(flux.vartheta(3.0, 1.0) - 0.5) < 1e-12);
    CHECK(flux.vartheta(1.0, 0.0) == 1.0);
    CHECK(flux.vartheta(1.0, 0.731) == 1.0);
    CHECK_THROWS_AS(flux.vartheta(0.5, 0.0), std::invalid_argument);

    // residual contract |f(s,z) - 1/U| <= 1e-12
    for (double U : {1.0001, 1.3, 2.7, 11.0, 250.0, 1e6}) {
        for (double z : {0.0, 0.37, 1.0}) {
            double s = flux.vartheta(U, z);
            CHECK(std::fabs(flux.model().fluid.f(s, z) - 1.0 / U) < 1e-12);
        }
    }
    // cap: huge U clamps to the s solving f = 1e-8
    double s_cap = flux.vartheta(1e12, 0.5);
    CHECK(std::fabs(flux.model().fluid.f(s_cap, 0.5) - 1e-8) < 1e-15);
}

TEST_CASE("theta/vartheta round trip") {
    LagrangeFlux flux(default_model());
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> us(0.05, 1.0), uc(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        double s = us(rng), c = uc(rng);
        double back = flux.vartheta(flux.theta(s, c), c);
        CHECK(std::fabs(back - s) < 1e-10);
    }
}

TEST_CASE("Lagrange flux: frozen values and structural signs") {
    LagrangeFlux flux(default_model());
    // F = -s U with s from the hand-evaluated inversions above
    CHECK(std::fabs(flux.F(2.0, 0.0) - (-1.0)) < 1e-12);
    CHECK(std::fabs(flux.F(3.0, 1.0) - (-1.5)) < 1e-12);
    CHECK(flux.F(1.0, 0.0) == -1.0);
    CHECK(flux.F(1.0, 1.0) == -1.0);
    // F < 0 and decreasing to -inf as U grows
    double prev = flux.F(20.0, 0.3);
    CHECK(prev < 0.0);
    for (double U : {100.0, 1000.0, 10000.0}) {
        double cur = flux.F(U, 0.3);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(flux.derivs(1.0, 0.0), std::invalid_argument);

    // sign checks: F_z < 0 everywhere; F_UU < 0 wherever F_U > 0
    for (double U : {1.01, 1.1, 1.5, 3.0, 20.0}) {
        for (double z : {0.0, 0.25, 0.75, 1.0}) {
            auto d = flux.derivs(U, z);
            CHECK(d.F_z < 0.0);
            if (d.F_U > 0.0) CHECK(d.F_UU < 0.0);
        }
    }
}

TEST_CASE("U_max and U_inflect: residuals and ordering") {
    LagrangeFlux flux(default_model());
    for (double z : {0.0, 0.2, 0.6, 1.0}) {
        double Um = flux.U_max(z);
        double Ui = flux.U_inflect(z);
        CHECK(std::fabs(flux.F_U(Um, z)) < 1e-10);
        CHECK(std::fabs(flux.F_UU(Ui, z)) < 1e-10);
        CHECK(Ui > Um);
        // F_U positive below the max, negative above
        CHECK(flux.F_U(1.0 + 0.5 * (Um - 1.0), z) > 0.0);
        CHECK(flux.F_U(Um * 1.2, z) < 0.0);
    }
    // reference model, zeta = 0: Welge point 1/sqrt(2), U_max = 1/f(s*)
    double s_star = default_model().fluid.s_welge(0.0);
    CHECK(std::fabs(s_star - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::fabs(flux.U_max(0.0) - 1.0 / default_model().fluid.f(s_star, 0.0)) < 1e-12);
}

TEST_CASE("adsorption: derived functions and inverses") {
    AdsorptionModel ads(2.0, 1.0);
    CHECK(ads.a(0.0) == 0.0);
    CHECK(std::fabs(ads.a(1.0) - 1.0) < 1e-15);
    CHECK(std::fabs(ads.a_z(1.0) - 0.5) < 1e-15);
    // p(z) = 2 z^2/(1+z)^2 for these parameters; q(1/8) = 1/3
    CHECK(std::fabs(ads.p(0.5) - 2.0 * 0.25 / 2.25) < 1e-15);
    CHECK(std::fabs(ads.q(1.0 / 8.0) - 1.0 / 3.0) < 1e-14);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uz(1e-6, 1.0);
    for (int i = 0; i < 300; ++i) {
        double z = uz(rng);
        CHECK(rel_err(ads.g(ads.a_z(z)), z) < 1e-12);
        CHECK(rel_err(ads.q(ads.p(z)), z) < 1e-12);
        CHECK(ads.b(z) > 0.0);                       // a/z - a_z > 0
        CHECK(std::fabs(ads.b(z) / z - ads.b_over_zeta(z)) < 1e-12);
        // d/dz (a/z) = -b/z^2 < 0
        CHECK(-ads.b(z) / (z * z) < 0.0);
    }
    CHECK(std::fabs(ads.b_over_zeta(0.0) - (-0.5 * ads.a_zz(0.0))) < 1e-15);
}

TEST_CASE("analytic derivatives match central finite differences") {
    ModelPair mp = default_model();
    LagrangeFlux flux(mp);
    const double h = 1e-5;
    const double tol = 1e-5;

    for (int i = 1; i < 64; ++i) {
        double s = 0.05 + 0.9 * i / 64.0;
        for (int j = 1; j < 64; j += 7) {
            double c = 0.05 + 0.9 * j / 64.0;
            const auto& fl = mp.fluid;
            double fd_s = (fl.f(s + h, c) - fl.f(s - h, c)) / (2 * h);
            double fd_c = (fl.f(s, c + h) - fl.f(s, c - h)) / (2 * h);
            double fd_ss = (fl.f_s(s + h, c) - fl.f_s(s - h, c)) / (2 * h);
            double fd_sc = (fl.f_s(s, c + h) - fl.f_s(s, c - h)) / (2 * h);
            CHECK(rel_err(fl.f_s(s, c), fd_s) < tol);
            CHECK(rel_err(fl.f_c(s, c), fd_c) < tol);
            CHECK(rel_err(fl.f_ss(s, c), fd_ss) < tol);
            CHECK(rel_err(fl.f_sc(s, c), fd_sc) < tol);
        }
    }

    const auto& ads = mp.ads;
    for (int i = 1; i < 64; ++i) {
        double z = 0.05 + 0.9 * i / 64.0;
        double fd1 = (ads.a(z + h) - ads.a(z - h)) / (2 * h);
        double fd2 = (ads.a_z(z + h) - ads.a_z(z - h)) / (2 * h);
        CHECK(rel_err(ads.a_z(z), fd1) < tol);
        CHECK(rel_err(ads.a_zz(z), fd2) < tol);
    }

    // Lagrange flux partials: U spans the physically used range via s
    for (int i = 0; i < 24; ++i) {
        double s = 0.25 + 0.7 * i / 24.0;
        for (double z : {0.1, 0.45, 0.9}) {
            double U = flux.theta(s, z);
            if (U <= 1.0 + 10 * h) continue;
            auto d = flux.derivs(U, z);
            double fd_U = (flux.F(U + h, z) - flux.F(U - h, z)) / (2 * h);
            double fd_z = (flux.F(U, z + h) - flux.F(U, z - h)) / (2 * h);
            double fd_UU = (flux.F_U(U + h, z) - flux.F_U(U - h, z)) / (2 * h);
            double fd_Uz = (flux.F_U(U, z + h) - flux.F_U(U, z - h)) / (2 * h);
            CHECK(rel_err(d.F_U, fd_U) < tol);
            CHECK(rel_err(d.F_z, fd_z) < tol);
            CHECK(rel_err(d.F_UU, fd_UU) < tol);
            CHECK(rel_err(d.F_Uz, fd_Uz) < tol);
        }
    }
}
