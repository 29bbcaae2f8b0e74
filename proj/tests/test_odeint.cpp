#include <doctest.h>

#include <cmath>

#include "linimm/odeint.hpp"

using namespace linimm;

namespace {
IntegratorConfig tight() {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    return cfg;
}
}  // namespace

TEST_CASE("harmonic oscillator returns after one revolution") {
    const auto sys = make_system("linear_osc");
    Vec x0(2);
    x0 << 1.0, 0.0;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    const Trajectory traj = integrate(sys, x0, 0.0, 2.0 * M_PI, cfg, 2.0 * M_PI);
    CHECK((traj.states.back() - x0).norm() < 1e-6);
}

TEST_CASE("fixed point stays fixed") {
    const auto sys = make_system("pendulum");
    const Trajectory traj = integrate(sys, Vec::Zero(2), 0.0, 10.0, {}, 0.1);
    for (const auto& s : traj.states) CHECK(s.norm() == doctest::Approx(0.0));
}

TEST_CASE("dense output matches the closed-form solution between steps") {
    const auto sys = make_system("linear_osc");
    Vec x0(2);
    x0 << 1.0, 0.0;
    const Trajectory traj = integrate(sys, x0, 0.0, 10.0, tight(), 0.037);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        CHECK(std::abs(traj.states[k][0] - std::cos(t)) < 1e-8);
        CHECK(std::abs(traj.states[k][1] + std::sin(t)) < 1e-8);
    }
}

TEST_CASE("sampling grid is uniform and endpoints are exact") {
    const auto sys = make_system("vdp");
    Vec x0(2);
    x0 << 0.5, 0.5;
    const Trajectory traj = integrate(sys, x0, 0.0, 7.0, {}, 0.35);
    REQUIRE(traj.size() == 21);
    for (std::size_t k = 0; k < traj.size(); ++k)
        CHECK(traj.times[k] == doctest::Approx(0.35 * k).epsilon(1e-12));
    // the final grid point coincides with the integration endpoint
    const Trajectory end = integrate(sys, x0, 0.0, 7.0, {}, 7.0);
    CHECK((traj.states.back() - end.states.back()).norm() < 1e-9);
}

TEST_CASE("fifth-order convergence in fixed-step mode") {
    const auto sys = make_system("linear_osc");
    Vec x0(2);
    x0 << 1.0, 0.0;
    Vec exact(2);
    exact << std::cos(3.0), -std::sin(3.0);
    const double e1 = (integrate_fixed(sys, x0, 0.0, 3.0, 0.05) - exact).norm();
    const double e2 = (integrate_fixed(sys, x0, 0.0, 3.0, 0.025) - exact).norm();
    const double ratio = e1 / e2;
    CHECK(ratio > 24.0);
    CHECK(ratio < 40.0);
}

TEST_CASE("variational equations of the rotation") {
    const auto sys = make_system("linear_osc");
    Vec x0(2);
    x0 << 0.7, 0.1;
    auto [traj, M] = integrate_variational(sys, x0, 0.0, 2.0 * M_PI, tight(), M_PI);
    CHECK((M - Mat::Identity(2, 2)).norm() < 1e-6);

    auto [traj0, M0] = integrate_variational(sys, x0, 0.0, 0.0, tight(), 1.0);
    CHECK((M0 - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("variational trajectory matches plain integration") {
    const auto sys = make_system("vdp");
    Vec x0(2);
    x0 << 1.5, 0.0;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    const Trajectory plain = integrate(sys, x0, 0.0, 10.0, cfg, 0.5);
    auto [vari, M] = integrate_variational(sys, x0, 0.0, 10.0, cfg, 0.5);
    REQUIRE(plain.size() == vari.size());
    for (std::size_t k = 0; k < plain.size(); ++k)
        CHECK((plain.states[k] - vari.states[k]).norm() < 10.0 * 1e-8);
}

TEST_CASE("monodromy determinant obeys the Abel-Liouville formula") {
    const auto sys = make_system("vdp");
    // land on the limit cycle first
    Vec seed(2);
    seed << 2.0, 0.0;
    const Trajectory settle = integrate(sys, seed, 0.0, 60.0, tight(), 60.0);
    const auto anchor = find_crossing(sys, settle.states.back(), 0.0, 10.0, tight(), {1, 0.0, -1});
    REQUIRE(anchor.has_value());
    const auto ret = find_crossing(sys, anchor->state, 0.0, 10.0, tight(), {1, 0.0, -1});
    REQUIRE(ret.has_value());
    const double T = ret->t;

    auto [traj, M] = integrate_variational(sys, anchor->state, 0.0, T, tight(), T / 2000.0);
    // integrate the trace of the Jacobian along the orbit (trapezoid on a fine grid)
    double integral = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double f_prev = 1.0 - traj.states[k - 1][0] * traj.states[k - 1][0];
        const double f_cur = 1.0 - traj.states[k][0] * traj.states[k][0];
        integral += 0.5 * (f_prev + f_cur) * (traj.times[k] - traj.times[k - 1]);
    }
    CHECK(std::abs(M.determinant() - std::exp(integral)) < 1e-6);
}

TEST_CASE("section crossing of the harmonic oscillator") {
    const auto sys = make_system("linear_osc");
    Vec x0(2);
    x0 << 1.0, 0.0;
    // x1(t) = cos t first crosses zero at pi/2 (downward in x1)
    const auto ev = find_crossing(sys, x0, 0.0, 10.0, tight(), {0, 0.0, -1});
    REQUIRE(ev.has_value());
    CHECK(std::abs(ev->t - 0.5 * M_PI) < 1e-8);
    CHECK(std::abs(ev->state[0]) < 1e-10);
}

TEST_CASE("no event on a constant trajectory") {
    const auto sys = make_system("pendulum");
    const auto ev = find_crossing(sys, Vec::Zero(2), 0.0, 10.0, {}, {0, 0.5, 0});
    CHECK(!ev.has_value());
}

TEST_CASE("van der pol crossings are separated by the cycle period") {
    const auto sys = make_system("vdp");
    Vec seed(2);
    seed << 2.0, 0.0;
    const Trajectory settle = integrate(sys, seed, 0.0, 60.0, {}, 60.0);
    // downward x2-crossings occur once per cycle, at the rightmost point (x1 > 0)
    const auto events = find_crossings(sys, settle.states.back(), 0.0, 30.0, {}, {1, 0.0, -1});
    REQUIRE(events.size() >= 3);
    for (std::size_t i = 1; i < events.size(); ++i) {
        CHECK(events[i].state[0] > 0.0);
        CHECK(std::abs((events[i].t - events[i - 1].t) - 6.66) < 0.05);
    }
}

TEST_CASE("integration failure carries the reached time") {
    const auto sys = make_system("pendulum");
    IntegratorConfig cfg;
    cfg.max_steps = 10;
    Vec x0(2);
    x0 << 1.0, 0.0;
    try {
        integrate(sys, x0, 0.0, 1000.0, cfg, 1.0);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.t_reached >= 0.0);
        CHECK(e.t_reached < 1000.0);
    }
}
