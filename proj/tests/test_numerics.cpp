#include <cmath>

#include "doctest.h"
#include "slugflow/ode.hpp"
#include "slugflow/quadrature.hpp"
#include "slugflow/rootfind.hpp"

using namespace slugflow;

TEST_CASE("find_root: cubic with and without derivative") {
    auto f = [](double x) { return x * x * x - 2.0; };
    auto r = find_root(f, 0.0, 2.0, 1e-14);
    CHECK(r.converged);
    CHECK(std::fabs(r.x - std::cbrt(2.0)) < 1e-12);

    std::function<double(double)> df = [](double x) { return 3.0 * x * x; };
    auto rn = find_root(f, 0.0, 2.0, 1e-14, 200, &df);
    CHECK(rn.converged);
    CHECK(std::fabs(rn.x - std::cbrt(2.0)) < 1e-12);
}

TEST_CASE("find_root: root at an endpoint and bad bracket") {
    auto f = [](double x) { return x; };
    auto r = find_root(f, 0.0, 1.0);
    CHECK(r.x == 0.0);
    CHECK_THROWS_AS(find_root(f, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("scan_sign_changes finds all zeros of sin on [0, 10]") {
    auto f = [](double x) { return std::sin(x); };
    auto br = scan_sign_changes(f, 0.1, 10.0, 200);
    REQUIRE(br.size() == 3);  // pi, 2pi, 3pi
    double roots[3] = {M_PI, 2 * M_PI, 3 * M_PI};
    for (int i = 0; i < 3; ++i) {
        auto r = find_root(f, br[i].first, br[i].second, 1e-13);
        CHECK(std::fabs(r.x - roots[i]) < 1e-10);
    }
}

TEST_CASE("adaptive_simpson: smooth integral to tight tolerance") {
    auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
    // exact: int_0^2 e^{-x} sin(3x) dx = [3 - e^{-2}(3 cos 6 + sin 6)] / 10
    double exact = (3.0 - std::exp(-2.0) * (3.0 * std::cos(6.0) + std::sin(6.0))) / 10.0;
    double got = adaptive_simpson(f, 0.0, 2.0, 1e-12);
    CHECK(std::fabs(got - exact) < 1e-10);
}

TEST_CASE("adaptive_simpson_split handles a kinked integrand") {
    auto f = [](double x) { return std::fabs(x - 0.3); };
    double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
    double got = adaptive_simpson_split(f, 0.0, 1.0, {0.3}, 1e-12);
    CHECK(std::fabs(got - exact) < 1e-12);
    // reversed orientation flips the sign
    double rev = adaptive_simpson_split(f, 1.0, 0.0, {0.3}, 1e-12);
    CHECK(std::fabs(rev + exact) < 1e-12);
}

TEST_CASE("ode: exponential decay forward and backward") {
    OdeRhs<1> rhs = [](double, const OdeState<1>& y, OdeState<1>& dy) { dy[0] = -y[0]; };
    auto traj = integrate_ode<1>(rhs, 0.0, {1.0}, 2.0, {1e-10, 1e-14});
    CHECK(traj.status == OdeStatus::Completed);
    CHECK(std::fabs(traj.nodes.back().y[0] - std::exp(-2.0)) < 1e-9);
    // dense output mid-way
    CHECK(std::fabs(traj.eval(1.3)[0] - std::exp(-1.3)) < 1e-7);

    auto back = integrate_ode<1>(rhs, 2.0, {std::exp(-2.0)}, 0.0, {1e-10, 1e-14});
    CHECK(back.status == OdeStatus::Completed);
    CHECK(std::fabs(back.nodes.back().y[0] - 1.0) < 1e-8);
}

TEST_CASE("ode: harmonic oscillator accuracy") {
    OdeRhs<2> rhs = [](double, const OdeState<2>& y, OdeState<2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto traj = integrate_ode<2>(rhs, 0.0, {1.0, 0.0}, 10.0, {1e-11, 1e-14});
    CHECK(std::fabs(traj.nodes.back().y[0] - std::cos(10.0)) < 1e-8);
    CHECK(std::fabs(traj.nodes.back().y[1] + std::sin(10.0)) < 1e-8);
}

TEST_CASE("ode: terminal event located accurately") {
    OdeRhs<1> rhs = [](double, const OdeState<1>&, OdeState<1>& dy) { dy[0] = 1.0; };
    std::vector<OdeEvent<1>> events(1);
    events[0].g = [](double, const OdeState<1>& y) { return y[0] - 0.7317; };
    events[0].direction = +1;
    auto traj = integrate_ode<1>(rhs, 0.0, {0.0}, 5.0, {1e-10, 1e-14}, events);
    REQUIRE(traj.status == OdeStatus::EventStop);
    CHECK(traj.event_index == 0);
    CHECK(std::fabs(traj.t_event - 0.7317) < 1e-10);
    CHECK(std::fabs(traj.nodes.back().y[0] - 0.7317) < 1e-10);
}

TEST_CASE("ode: event direction filtering on a sine wave") {
    OdeRhs<1> rhs = [](double t, const OdeState<1>&, OdeState<1>& dy) { dy[0] = std::cos(t); };
    std::vector<OdeEvent<1>> events(1);
    events[0].g = [](double, const OdeState<1>& y) { return y[0]; };
    events[0].direction = -1;  // downward zero of sin(t): first at t = pi
    auto traj = integrate_ode<1>(rhs, 0.1, {std::sin(0.1)}, 10.0, {1e-10, 1e-14}, events);
    REQUIRE(traj.status == OdeStatus::EventStop);
    CHECK(std::fabs(traj.t_event - M_PI) < 1e-8);
}
