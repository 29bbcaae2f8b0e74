#include <doctest.h>

#include "linimm/analytic.hpp"

using namespace linimm;

TEST_CASE("harmonic family default example") {
    const auto report = verify_harmonic_family_case(1e-8);
    CHECK(report.pass);
    CHECK(report.max_error < 1e-8);
    CHECK(report.details["Omega_at_0"].get<double>() == doctest::Approx(1.3));
    CHECK(std::abs(report.details["Omega_at_1"].get<double>()) < 1e-12);
}

TEST_CASE("harmonic family without an inverse warns and defers") {
    HarmonicFamily fam = default_harmonic_family(1.0);
    fam.inverse = nullptr;
    const DynamicalSystem sys = build_harmonic_family(fam);
    CHECK_THROWS_AS(sys.rhs(Vec::Zero(2), 0.0), std::runtime_error);
}

TEST_CASE("limit cycle case verifies against the closed form") {
    const auto report = verify_limit_cycle_case(1e-6);
    CHECK(report.pass);
    CHECK(report.max_error < 1e-6);
}

TEST_CASE("limit cycle observables at specific points") {
    // radius 2 start: y1(1) = 1 + e^{-1}
    const auto sys = make_system("app_lc");
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    Vec x0(2);
    x0 << 2.0 * std::sin(0.7), 2.0 * std::cos(0.7);
    const Trajectory traj = integrate(sys, x0, 0.0, 2.0 * M_PI, cfg, 0.5);
    CHECK(std::abs(traj.states[2].norm() - (1.0 + std::exp(-1.0))) < 1e-8);
    // unit angular speed: the angle advances by 2 pi over a 2 pi span
    double th = 0.7;
    double prev = th;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        double a = std::atan2(traj.states[k][0], traj.states[k][1]);
        while (a < prev - M_PI) a += 2.0 * M_PI;
        while (a > prev + M_PI) a -= 2.0 * M_PI;
        prev = a;
    }
    CHECK(std::abs(prev - (0.7 + 2.0 * M_PI)) < 1e-8);
    // on-circle start stays on the circle
    Vec on(2);
    on << std::sin(1.2), std::cos(1.2);
    const Trajectory circle = integrate(sys, on, 0.0, 5.0, cfg, 0.25);
    for (const auto& s : circle.states) CHECK(std::abs(s.norm() - 1.0) < 1e-8);
}

TEST_CASE("coexisting case verifies and resolves the stability pattern") {
    const auto report = verify_coexisting_case(-0.5, -2.0, 1e-6);
    CHECK(report.pass);
    CHECK(report.max_error < 1e-6);
    CHECK(report.details["stability_pattern_ok"].get<bool>());
    // slow-axis approach: terminal angles sit at pi/2 mod pi
    for (const double th : report.details["terminal_angles"].get<std::vector<double>>()) {
        const double frac = std::abs(std::remainder(th - 0.5 * M_PI, M_PI));
        CHECK(frac < 1e-6);
    }
    CHECK_THROWS_AS(verify_coexisting_case(-2.0, -0.5, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(verify_coexisting_case(0.5, -1.0, 1e-6), std::invalid_argument);
}
