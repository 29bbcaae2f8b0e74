#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace linimm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Feedforward network with three hidden layers of twenty tansig units and a
/// linear output layer. Only the input and output widths vary.
struct MlpParams {
    std::vector<Mat> weights;  // [in->20, 20->20, 20->20, 20->out]
    std::vector<Vec> biases;

    int in_dim() const { return static_cast<int>(weights.front().cols()); }
    int out_dim() const { return static_cast<int>(weights.back().rows()); }
    int n_params() const;
};

/// tansig(x) = 2/(1+e^{-2x}) - 1; analytically equal to tanh(x).
double tansig(double x);

/// Zero-initialized network of the fixed 20-20-20 topology.
MlpParams make_mlp(int in_dim, int out_dim);

/// Seeded symmetric init, uniform in [-a, a] with a = sqrt(6/(fan_in+fan_out)).
MlpParams init_mlp(int in_dim, int out_dim, std::uint64_t seed);

Vec forward(const MlpParams& net, const Vec& x);

/// Row-per-sample forward evaluation.
Mat forward_batch(const MlpParams& net, const Mat& xs);

/// Derivative of every output with respect to every parameter, flattened
/// layer-major with weights before biases and row-major within each weight
/// matrix. Shape: out_dim x n_params.
Mat param_jacobian(const MlpParams& net, const Vec& x);

/// In-place variant writing into a preallocated out_dim x n_params block.
void param_jacobian_into(const MlpParams& net, const Vec& x, Eigen::Ref<Mat> jac);

/// Parameter vector in the documented flattening order.
Vec flatten(const MlpParams& net);
void unflatten(const Vec& p, MlpParams& net);

nlohmann::json mlp_to_json(const MlpParams& net);
MlpParams mlp_from_json(const nlohmann::json& j);

/// Per-column affine map u -> (u - center) / halfspan used to condition
/// network inputs and targets. Identity when fitted to a constant column.
struct ColumnScaler {
    Vec center, halfspan;

    static ColumnScaler fit(const Mat& samples);
    static ColumnScaler identity(int dim);
    Mat apply(const Mat& raw) const;
    Vec apply(const Vec& raw) const;
    Mat invert(const Mat& scaled) const;
    Vec invert(const Vec& scaled) const;
};

/// A trained network together with its input/output conditioning.
struct ScaledMlp {
    MlpParams net;
    ColumnScaler in_scaler, out_scaler;
    std::uint64_t seed = 0;  // init seed used when training this net

    Vec eval(const Vec& x) const { return out_scaler.invert(forward(net, in_scaler.apply(x))); }
    Mat eval_batch(const Mat& xs) const {
        return out_scaler.invert(forward_batch(net, in_scaler.apply(xs)));
    }
};

nlohmann::json scaled_mlp_to_json(const ScaledMlp& m);
ScaledMlp scaled_mlp_from_json(const nlohmann::json& j);

}  // namespace linimm
