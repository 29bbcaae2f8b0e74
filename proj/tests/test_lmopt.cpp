#include <doctest.h>

#include <random>

#include "linimm/lmopt.hpp"

using namespace linimm;

TEST_CASE("solve_damped_normal hand cases") {
    {
        const Mat JtJ = Mat::Identity(3, 3);
        Vec v(3);
        v << 1.0, -2.0, 0.5;
        CHECK((solve_damped_normal(JtJ, v, 0.0) + v).norm() < 1e-14);
    }
    {
        Mat JtJ = Mat::Zero(2, 2);
        JtJ(0, 0) = 1.0;
        JtJ(1, 1) = 4.0;
        Vec rhs(2);
        rhs << 1.0, 4.0;
        const Vec d = solve_damped_normal(JtJ, rhs, 1.0);
        CHECK(d[0] == doctest::Approx(-0.5));
        CHECK(d[1] == doctest::Approx(-0.5));
    }
    {
        // singular JtJ is regularized by positive damping
        Mat JtJ(2, 2);
        JtJ << 1.0, 1.0, 1.0, 1.0;
        Vec rhs(2);
        rhs << 1.0, 1.0;
        const Vec d = solve_damped_normal(JtJ, rhs, 0.5);
        CHECK(d.allFinite());
    }
}

namespace {

// Linear least squares |A p - b|^2 posed as an LmProblem.
LmProblem linear_problem(const Mat& A, const Vec& b) {
    LmProblem prob;
    prob.n_params = static_cast<int>(A.cols());
    prob.normal_eqs = [&A, &b](const Vec& p, Mat& JtJ, Vec& Jtr) {
        const Vec r = A * p - b;
        JtJ = A.transpose() * A;
        Jtr = A.transpose() * r;
        return r.squaredNorm();
    };
    prob.loss = [&A, &b](const Vec& p) { return (A * p - b).squaredNorm(); };
    return prob;
}

}  // namespace

TEST_CASE("linear regression reaches the normal-equations solution") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 1.0);
    Mat A(40, 5);
    Vec b(40);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 5; ++j) A(i, j) = noise(rng);
        b[i] = noise(rng);
    }
    const Vec p_star = (A.transpose() * A).ldlt().solve(A.transpose() * b);

    LmConfig cfg;
    const auto [p, report] = lm_minimize(linear_problem(A, b), Vec::Zero(5), cfg);
    CHECK((p - p_star).norm() < 1e-8);
    CHECK(report.iterations <= 5);
}

TEST_CASE("zero-residual start stops immediately with GradSmall") {
    const MlpParams net = init_mlp(2, 1, 3);
    Mat inputs(10, 2);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        inputs(i, 0) = dist(rng);
        inputs(i, 1) = dist(rng);
    }
    const Mat targets = forward_batch(net, inputs);
    const auto [trained, report] = train(net, inputs, targets, {});
    CHECK(report.terminal_reason == LmStop::GradSmall);
    CHECK(report.iterations == 0);
    CHECK((flatten(trained) - flatten(net)).norm() == 0.0);
}

TEST_CASE("accepted-step losses decrease monotonically") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-M_PI, M_PI);
    Mat inputs(120, 1);
    Mat targets(120, 1);
    for (int i = 0; i < 120; ++i) {
        inputs(i, 0) = dist(rng);
        targets(i, 0) = std::sin(inputs(i, 0));
    }
    LmConfig cfg;
    cfg.max_iters = 30;
    const auto [trained, report] = train(init_mlp(1, 1, 5), inputs, targets, cfg);
    for (std::size_t i = 1; i < report.loss_history.size(); ++i)
        CHECK(report.loss_history[i] < report.loss_history[i - 1]);
    // mu stays within its documented bracket on the log
    const double mu_min = cfg.mu_init * std::pow(cfg.mu_factor, -60.0);
    for (const auto& row : report.log) {
        CHECK(row.mu >= mu_min);
        CHECK(row.mu <= cfg.mu_max);
    }
}

TEST_CASE("sine fit reaches small rmse") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> dist(-M_PI, M_PI);
    Mat inputs(200, 1);
    Mat targets(200, 1);
    for (int i = 0; i < 200; ++i) {
        inputs(i, 0) = dist(rng);
        targets(i, 0) = std::sin(inputs(i, 0));
    }
    LmConfig cfg;
    cfg.max_iters = 250;
    const auto [trained, report] = train(init_mlp(1, 1, 7), inputs, targets, cfg);
    const double rmse = std::sqrt(report.final_loss() / 200.0);
    CHECK(rmse < 1e-3);
}

TEST_CASE("gradient is small at GradSmall termination") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat A(20, 3);
    Vec b(20);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 3; ++j) A(i, j) = dist(rng);
        b[i] = dist(rng);
    }
    const LmProblem prob = linear_problem(A, b);
    const auto [p, report] = lm_minimize(prob, Vec::Zero(3), {});
    if (report.terminal_reason == LmStop::GradSmall) {
        Mat JtJ;
        Vec Jtr;
        JtJ.resize(3, 3);
        Jtr.resize(3);
        prob.normal_eqs(p, JtJ, Jtr);
        CHECK(Jtr.lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("zero iteration budget returns the initialization") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat inputs(15, 2), targets(15, 1);
    for (int i = 0; i < 15; ++i) {
        inputs(i, 0) = dist(rng);
        inputs(i, 1) = dist(rng);
        targets(i, 0) = dist(rng);
    }
    LmConfig cfg;
    cfg.max_iters = 0;
    const MlpParams net = init_mlp(2, 1, 9);
    const auto [trained, report] = train(net, inputs, targets, cfg);
    CHECK((flatten(trained) - flatten(net)).norm() == 0.0);
    CHECK(report.terminal_reason == LmStop::MaxIters);
    CHECK(report.loss_history.size() == 1);
}
