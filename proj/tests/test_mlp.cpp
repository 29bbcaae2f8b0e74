#include <doctest.h>

#include <random>

#include "linimm/mlp.hpp"
#include "oracles.hpp"

using namespace linimm;

TEST_CASE("tansig values and identities") {
    CHECK(tansig(0.0) == doctest::Approx(0.0));
    CHECK(tansig(1.0) == doctest::Approx(0.761594155955765).epsilon(1e-12));
    for (double x = -20.0; x <= 20.0; x += 0.37) {
        CHECK(std::abs(tansig(x) - std::tanh(x)) < 1e-12);
        CHECK(std::abs(tansig(-x) + tansig(x)) < 1e-15);
        CHECK(tansig(x) > -1.0);
        CHECK(tansig(x) < 1.0);
    }
    // saturation without overflow
    CHECK(tansig(1e4) == doctest::Approx(1.0));
    CHECK(tansig(-1e4) == doctest::Approx(-1.0));
}

TEST_CASE("zero network maps everything to zero") {
    const MlpParams net = make_mlp(3, 2);
    Vec x(3);
    x << 0.3, -1.2, 5.0;
    CHECK(forward(net, x).norm() == doctest::Approx(0.0));
}

TEST_CASE("forward matches the naive evaluator") {
    const MlpParams net = init_mlp(3, 2, 42);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec x(3);
        std::vector<double> xv(3);
        for (int i = 0; i < 3; ++i) {
            x[i] = dist(rng);
            xv[i] = x[i];
        }
        const Vec got = forward(net, x);
        const auto want = oracles::naive_forward(net, xv);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
    }
}

TEST_CASE("forward_batch agrees with forward") {
    const MlpParams net = init_mlp(2, 3, 5);
    Mat xs(4, 2);
    xs << 0.1, -0.2, 1.0, 0.5, -1.5, 0.3, 2.0, -1.0;
    const Mat out = forward_batch(net, xs);
    for (int r = 0; r < 4; ++r)
        CHECK((out.row(r).transpose() - forward(net, xs.row(r).transpose())).norm() < 1e-14);
}

TEST_CASE("dimension mismatch raises") {
    const MlpParams net = make_mlp(3, 2);
    CHECK_THROWS_AS(forward(net, Vec::Zero(4)), std::invalid_argument);
    CHECK_THROWS_AS(param_jacobian(net, Vec::Zero(2)), std::invalid_argument);
}

TEST_CASE("parameter jacobian matches central finite differences") {
    const MlpParams net = init_mlp(2, 2, 99);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int trial = 0; trial < 3; ++trial) {
        Vec x(2);
        x << dist(rng), dist(rng);
        const Mat J = param_jacobian(net, x);
        const Mat J_fd = oracles::fd_param_jacobian(net, x);
        const double rel = (J - J_fd).norm() / J_fd.norm();
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("jacobian structure for zero input and zero biases") {
    MlpParams net = init_mlp(3, 2, 11);
    for (auto& b : net.biases) b.setZero();
    const Vec x = Vec::Zero(3);
    // every layer input vanishes (tansig(0) = 0), so all weight columns are
    // zero and the output-layer bias block is the identity
    const Mat J = param_jacobian(net, x);
    int col = 0;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const int w_cols = static_cast<int>(net.weights[l].size());
        CHECK(J.middleCols(col, w_cols).norm() == doctest::Approx(0.0));
        col += w_cols + static_cast<int>(net.biases[l].size());
    }
    CHECK((J.rightCols(2) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("first-order Taylor consistency of single-parameter perturbations") {
    const MlpParams net = init_mlp(2, 1, 21);
    Vec x(2);
    x << 0.4, -0.9;
    const Mat J = param_jacobian(net, x);
    const Vec p0 = flatten(net);
    MlpParams work = net;
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pick(0, net.n_params() - 1);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = pick(rng);
        const double delta = 1e-5;
        Vec p = p0;
        p[k] += delta;
        unflatten(p, work);
        const double df = (forward(work, x) - forward(net, x))[0];
        CHECK(std::abs(df - J(0, k) * delta) < 5e-9);
    }
}

TEST_CASE("flatten round trip is exact") {
    const MlpParams net = init_mlp(4, 3, 1234);
    MlpParams copy = make_mlp(4, 3);
    unflatten(flatten(net), copy);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        CHECK((net.weights[l] - copy.weights[l]).norm() == 0.0);
        CHECK((net.biases[l] - copy.biases[l]).norm() == 0.0);
    }
}

TEST_CASE("lipschitz bound from layer spectral norms") {
    const MlpParams net = init_mlp(2, 2, 77);
    double bound = 1.0;
    for (const auto& W : net.weights)
        bound *= W.jacobiSvd().singularValues()(0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vec a(2), b(2);
        a << dist(rng), dist(rng);
        b << dist(rng), dist(rng);
        const double lhs = (forward(net, a) - forward(net, b)).norm();
        CHECK(lhs <= bound * (a - b).norm() + 1e-12);
    }
}

TEST_CASE("json round trip is bit-exact") {
    MlpParams net = init_mlp(3, 2, 2024);
    const nlohmann::json j = mlp_to_json(net);
    const std::string text = j.dump();
    const MlpParams back = mlp_from_json(nlohmann::json::parse(text));
    CHECK((flatten(net) - flatten(back)).norm() == 0.0);

    ScaledMlp sm;
    sm.net = net;
    sm.in_scaler = ColumnScaler::fit((Mat(2, 3) << 1, 2, 3, -1, 0, 7).finished());
    sm.out_scaler = ColumnScaler::identity(2);
    sm.seed = 99;
    const ScaledMlp back2 = scaled_mlp_from_json(nlohmann::json::parse(scaled_mlp_to_json(sm).dump()));
    CHECK((flatten(back2.net) - flatten(net)).norm() == 0.0);
    CHECK(back2.seed == 99);
    Vec x(3);
    x << 0.5, 1.0, 4.0;
    CHECK((sm.eval(x) - back2.eval(x)).norm() == 0.0);
}

TEST_CASE("column scaler handles constant columns") {
    Mat samples(3, 2);
    samples << 1.0, 5.0, 2.0, 5.0, 3.0, 5.0;
    const ColumnScaler sc = ColumnScaler::fit(samples);
    const Mat scaled = sc.apply(samples);
    CHECK(scaled.col(0).maxCoeff() == doctest::Approx(1.0));
    CHECK(scaled.col(0).minCoeff() == doctest::Approx(-1.0));
    CHECK((sc.invert(scaled) - samples).norm() < 1e-14);
}
