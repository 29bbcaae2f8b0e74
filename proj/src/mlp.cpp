#include "linimm/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace linimm {

namespace {
constexpr int kHidden = 20;
constexpr int kLayers = 4;  // three hidden + output

void check_input(const MlpParams& net, const Vec& x) {
    if (static_cast<int>(x.size()) != net.in_dim())
        throw std::invalid_argument("mlp: input has " + std::to_string(x.size()) +
                                    " entries, expected " + std::to_string(net.in_dim()));
}
}  // namespace

double tansig(double x) { return 2.0 / (1.0 + std::exp(-2.0 * x)) - 1.0; }

int MlpParams::n_params() const {
    int n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += static_cast<int>(weights[l].size() + biases[l].size());
    return n;
}

MlpParams make_mlp(int in_dim, int out_dim) {
    MlpParams net;
    const int dims[kLayers + 1] = {in_dim, kHidden, kHidden, kHidden, out_dim};
    for (int l = 0; l < kLayers; ++l) {
        net.weights.emplace_back(Mat::Zero(dims[l + 1], dims[l]));
        net.biases.emplace_back(Vec::Zero(dims[l + 1]));
    }
    return net;
}

MlpParams init_mlp(int in_dim, int out_dim, std::uint64_t seed) {
    MlpParams net = make_mlp(in_dim, out_dim);
    std::mt19937_64 rng(seed);
    for (int l = 0; l < kLayers; ++l) {
        const double a = std::sqrt(6.0 / (net.weights[l].cols() + net.weights[l].rows()));
        std::uniform_real_distribution<double> dist(-a, a);
        for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i)
            for (Eigen::Index j = 0; j < net.weights[l].cols(); ++j) net.weights[l](i, j) = dist(rng);
        // Biases start at zero.
    }
    return net;
}

Vec forward(const MlpParams& net, const Vec& x) {
    check_input(net, x);
    Vec a = x;
    for (int l = 0; l < kLayers; ++l) {
        a = (net.weights[l] * a + net.biases[l]).eval();
        if (l + 1 < kLayers) a = a.unaryExpr([](double v) { return tansig(v); });
    }
    return a;
}

Mat forward_batch(const MlpParams& net, const Mat& xs) {
    if (static_cast<int>(xs.cols()) != net.in_dim())
        throw std::invalid_argument("mlp: batch has wrong column count");
    Mat a = xs.transpose();
    for (int l = 0; l < kLayers; ++l) {
        a = (net.weights[l] * a).colwise() + net.biases[l];
        if (l + 1 < kLayers) a = a.unaryExpr([](double v) { return tansig(v); });
    }
    return a.transpose();
}

void param_jacobian_into(const MlpParams& net, const Vec& x, Eigen::Ref<Mat> jac) {
    check_input(net, x);
    const int out = net.out_dim();

    // Forward pass keeping activations. acts[l] is the input to layer l.
    std::vector<Vec> acts(kLayers);
    acts[0] = x;
    for (int l = 0; l + 1 < kLayers; ++l)
        acts[l + 1] =
            (net.weights[l] * acts[l] + net.biases[l]).unaryExpr([](double v) { return tansig(v); });

    // Reverse pass for all outputs at once: delta is d(out)/d(z_l), out x width(l).
    std::vector<Mat> deltas(kLayers);
    deltas[kLayers - 1] = Mat::Identity(out, out);
    for (int l = kLayers - 2; l >= 0; --l) {
        Mat d = deltas[l + 1] * net.weights[l + 1];
        // tansig'(z) = 1 - a^2 with a the post-activation value.
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            d.col(j) *= 1.0 - acts[l + 1][j] * acts[l + 1][j];
        deltas[l] = std::move(d);
    }

    Eigen::Index col = 0;
    for (int l = 0; l < kLayers; ++l) {
        const Eigen::Index rows = net.weights[l].rows(), cols = net.weights[l].cols();
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) jac.col(col++) = deltas[l].col(i) * acts[l][j];
        for (Eigen::Index i = 0; i < rows; ++i) jac.col(col++) = deltas[l].col(i);
    }
}

Mat param_jacobian(const MlpParams& net, const Vec& x) {
    Mat jac(net.out_dim(), net.n_params());
    param_jacobian_into(net, x, jac);
    return jac;
}

Vec flatten(const MlpParams& net) {
    Vec p(net.n_params());
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Mat& W = net.weights[l];
        for (Eigen::Index i = 0; i < W.rows(); ++i)
            for (Eigen::Index j = 0; j < W.cols(); ++j) p[k++] = W(i, j);
        for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) p[k++] = net.biases[l][i];
    }
    return p;
}

void unflatten(const Vec& p, MlpParams& net) {
    if (p.size() != net.n_params())
        throw std::invalid_argument("unflatten: parameter vector has wrong length");
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Mat& W = net.weights[l];
        for (Eigen::Index i = 0; i < W.rows(); ++i)
            for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = p[k++];
        for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) net.biases[l][i] = p[k++];
    }
}

nlohmann::json mlp_to_json(const MlpParams& net) {
    const Vec p = flatten(net);
    return {{"in_dim", net.in_dim()},
            {"out_dim", net.out_dim()},
            {"hidden", {kHidden, kHidden, kHidden}},
            {"params", std::vector<double>(p.data(), p.data() + p.size())}};
}

MlpParams mlp_from_json(const nlohmann::json& j) {
    MlpParams net = make_mlp(j.at("in_dim").get<int>(), j.at("out_dim").get<int>());
    const auto raw = j.at("params").get<std::vector<double>>();
    unflatten(Eigen::Map<const Vec>(raw.data(), static_cast<Eigen::Index>(raw.size())), net);
    return net;
}

ColumnScaler ColumnScaler::fit(const Mat& samples) {
    ColumnScaler s;
    const Vec lo = samples.colwise().minCoeff();
    const Vec hi = samples.colwise().maxCoeff();
    s.center = 0.5 * (lo + hi);
    s.halfspan = 0.5 * (hi - lo);
    for (Eigen::Index i = 0; i < s.halfspan.size(); ++i)
        if (s.halfspan[i] < 1e-12) {
            s.center[i] = 0.0;
            s.halfspan[i] = 1.0;
        }
    return s;
}

ColumnScaler ColumnScaler::identity(int dim) {
    return {Vec::Zero(dim), Vec::Ones(dim)};
}

Mat ColumnScaler::apply(const Mat& raw) const {
    return (raw.rowwise() - center.transpose()).array().rowwise() / halfspan.transpose().array();
}

Vec ColumnScaler::apply(const Vec& raw) const {
    return ((raw - center).array() / halfspan.array()).matrix();
}

Mat ColumnScaler::invert(const Mat& scaled) const {
    return (scaled.array().rowwise() * halfspan.transpose().array()).matrix().rowwise() +
           center.transpose();
}

Vec ColumnScaler::invert(const Vec& scaled) const {
    return (scaled.array() * halfspan.array()).matrix() + center;
}

nlohmann::json scaled_mlp_to_json(const ScaledMlp& m) {
    nlohmann::json j = mlp_to_json(m.net);
    j["seed"] = m.seed;
    j["in_center"] = std::vector<double>(m.in_scaler.center.data(),
                                         m.in_scaler.center.data() + m.in_scaler.center.size());
    j["in_halfspan"] = std::vector<double>(m.in_scaler.halfspan.data(),
                                           m.in_scaler.halfspan.data() + m.in_scaler.halfspan.size());
    j["out_center"] = std::vector<double>(m.out_scaler.center.data(),
                                          m.out_scaler.center.data() + m.out_scaler.center.size());
    j["out_halfspan"] = std::vector<double>(
        m.out_scaler.halfspan.data(), m.out_scaler.halfspan.data() + m.out_scaler.halfspan.size());
    return j;
}

ScaledMlp scaled_mlp_from_json(const nlohmann::json& j) {
    ScaledMlp m;
    m.net = mlp_from_json(j);
    m.seed = j.value("seed", std::uint64_t{0});
    auto vec = [&j](const char* key) {
        const auto raw = j.at(key).get<std::vector<double>>();
        return Vec(Eigen::Map<const Vec>(raw.data(), static_cast<Eigen::Index>(raw.size())));
    };
    m.in_scaler = {vec("in_center"), vec("in_halfspan")};
    m.out_scaler = {vec("out_center"), vec("out_halfspan")};
    return m;
}

}  // namespace linimm
