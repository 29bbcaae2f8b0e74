#include <doctest.h>

#include "linimm/dynsys.hpp"
#include "linimm/odeint.hpp"

using namespace linimm;

TEST_CASE("pendulum fixed point and energy") {
    const auto sys = make_system("pendulum");
    Vec x0 = Vec::Zero(2);
    CHECK(sys.rhs(x0, 0.0).norm() == doctest::Approx(0.0));
    CHECK(energy(sys, x0) == doctest::Approx(-1.0));
    Vec x1(2);
    x1 << 1.0, 0.5;
    CHECK(energy(sys, x1) == doctest::Approx(0.5 * 0.25 - std::cos(1.0)));
}

TEST_CASE("duffing_cons fixed points and energy") {
    const auto sys = make_system("duffing_cons");
    Vec x(2);
    x << 1.0, 0.0;
    CHECK(sys.rhs(x, 0.0).norm() == doctest::Approx(0.0));
    CHECK(energy(sys, x) == doctest::Approx(-0.25));
    x << 0.0, 0.0;
    CHECK(energy(sys, x) == doctest::Approx(0.0));
}

TEST_CASE("duffing_fd defaults and phase dynamics") {
    const auto sys = make_system("duffing_fd");
    CHECK(sys.params.at("c") == doctest::Approx(0.02));
    CHECK(sys.params.at("k") == doctest::Approx(1.0));
    CHECK(sys.params.at("k3") == doctest::Approx(1.0));
    CHECK(sys.params.at("f") == doctest::Approx(0.1));
    CHECK(sys.params.at("Omega") == doctest::Approx(1.3));
    for (const double x1 : {-0.4, 0.0, 0.9}) {
        Vec x(3);
        x << x1, 0.3, 2.0;
        CHECK(sys.rhs(x, 0.0)[2] == doctest::Approx(1.3));
    }
}

TEST_CASE("unknown name and missing parameter errors") {
    CHECK_THROWS_WITH_AS(make_system("lorenz"), doctest::Contains("unknown system"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_system("linear_limit_cycle", {{"D", 1.0}}),
                         doctest::Contains("Omega"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_system("app_coexist", {{"lambda1", -0.5}}),
                         doctest::Contains("lambda2"), std::invalid_argument);
    const auto sys = make_system("vdp");
    Vec x(2);
    x << 1.0, 1.0;
    CHECK_THROWS_WITH_AS(energy(sys, x), doctest::Contains("no first integral"),
                         std::invalid_argument);
}

TEST_CASE("catalogue systems are autonomous") {
    for (const auto& name : {"pendulum", "duffing_cons", "vdp", "duffing_fd", "app_lc"}) {
        std::map<std::string, double> params;
        const auto sys = make_system(name, params);
        Vec x = Vec::Constant(sys.dim, 0.37);
        CHECK((sys.rhs(x, 0.0) - sys.rhs(x, 17.3)).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("analytic jacobians match finite differences") {
    const std::vector<std::pair<std::string, std::map<std::string, double>>> cases = {
        {"pendulum", {}},
        {"duffing_cons", {}},
        {"vdp", {}},
        {"duffing_fd", {}},
        {"app_lc", {}},
        {"app_coexist", {{"lambda1", -0.5}, {"lambda2", -2.0}}},
        {"damped_ext_linear", {{"c_l", 0.02}, {"omega_l", 1.3}, {"Omega", 1.3}}},
    };
    for (const auto& [name, params] : cases) {
        const auto sys = make_system(name, params);
        Vec x = Vec::LinSpaced(sys.dim, 0.4, 0.9);
        const Mat J = sys.jacobian(x, 0.0);
        const double h = 1e-7;
        for (int j = 0; j < sys.dim; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const Vec col = (sys.rhs(xp, 0.0) - sys.rhs(xm, 0.0)) / (2.0 * h);
            CHECK((J.col(j) - col).norm() < 1e-5);
        }
    }
}

TEST_CASE("linear prototype expansions") {
    const auto llc = LinearSystemSpec::linear_limit_cycle(1.06, 0.943);
    Vec y(2);
    y << 0.4, 2.0;
    const Vec dy = llc.rhs(y);
    CHECK(dy[0] == doctest::Approx(-1.06 * (0.4 - 1.0)));
    CHECK(dy[1] == doctest::Approx(0.943));

    const auto harm = LinearSystemSpec::harmonic(2.0);
    Vec z(2);
    z << 0.3, -0.7;
    CHECK((harm.rhs(z) - Vec(harm.as_matrix() * z)).norm() == doctest::Approx(0.0));
    // make_system counterparts agree with the prototype expansion
    const auto hw = make_system("harmonic_w", {{"omega", 2.0}});
    CHECK((harm.rhs(z) - hw.rhs(z, 0.0)).norm() == doctest::Approx(0.0));

    const auto ext = LinearSystemSpec::extended_harmonic(1.0);
    Vec w(3);
    w << 0.5, 0.2, -1.0;
    const auto ext_sys = make_system("ext_linear_osc");
    CHECK((ext.rhs(w) - ext_sys.rhs(w, 0.0)).norm() == doctest::Approx(0.0));

    const auto de = LinearSystemSpec::damped_extended(0.02, 1.3, 1.3);
    Vec u(4);
    u << 0.3, -0.2, 1.0, 1.0;
    const auto de_sys =
        make_system("damped_ext_linear", {{"c_l", 0.02}, {"omega_l", 1.3}, {"Omega", 1.3}});
    CHECK((de.rhs(u) - de_sys.rhs(u, 0.0)).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(llc.as_matrix(), std::invalid_argument);
    CHECK_THROWS_AS(de.as_matrix(), std::invalid_argument);
}

TEST_CASE("energy conservation along integrated orbits") {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    {
        const auto sys = make_system("pendulum");
        Vec x0(2);
        x0 << 1.0, 0.0;
        const double E0 = energy(sys, x0);
        const Trajectory traj = integrate(sys, x0, 0.0, 100.0, cfg, 0.5);
        for (const auto& s : traj.states) CHECK(std::abs(energy(sys, s) - E0) < 1e-6);
    }
    {
        const auto sys = make_system("duffing_cons");
        Vec x0(2);
        x0 << 1.3, 0.0;
        const double E0 = energy(sys, x0);
        const Trajectory traj = integrate(sys, x0, 0.0, 100.0, cfg, 0.5);
        for (const auto& s : traj.states) CHECK(std::abs(energy(sys, s) - E0) < 1e-6);
    }
}
