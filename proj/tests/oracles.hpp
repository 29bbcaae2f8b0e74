#pragma once

// Independent oracles used by the tests; these deliberately avoid the code
// paths they are checking.

#include <cmath>
#include <vector>

#include "linimm/mlp.hpp"

namespace oracles {

/// Complete elliptic integral of the first kind via the arithmetic-geometric
/// mean, K(k) = pi / (2 AGM(1, sqrt(1-k^2))).
inline double elliptic_K(double k) {
    double a = 1.0;
    double b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double am = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = am;
    }
    return M_PI / (2.0 * a);
}

/// Pendulum orbit period at energy E in (-1, 1): T = 4 K(sqrt((1+E)/2)).
inline double pendulum_period(double E) { return 4.0 * elliptic_K(std::sqrt(0.5 * (1.0 + E))); }

/// Plain-loop feedforward evaluation, independent of the Eigen path.
inline std::vector<double> naive_forward(const linimm::MlpParams& net,
                                         const std::vector<double>& x) {
    std::vector<double> a = x;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto& W = net.weights[l];
        const auto& b = net.biases[l];
        std::vector<double> z(W.rows());
        for (Eigen::Index i = 0; i < W.rows(); ++i) {
            double acc = b[i];
            for (Eigen::Index j = 0; j < W.cols(); ++j) acc += W(i, j) * a[j];
            z[i] = acc;
        }
        if (l + 1 < net.weights.size())
            for (auto& v : z) v = std::tanh(v);
        a = std::move(z);
    }
    return a;
}

/// Central finite-difference Jacobian of the network outputs with respect to
/// the flattened parameters.
inline linimm::Mat fd_param_jacobian(const linimm::MlpParams& net, const linimm::Vec& x,
                                     double step = 1e-6) {
    linimm::MlpParams work = net;
    const linimm::Vec p0 = linimm::flatten(net);
    linimm::Mat jac(net.out_dim(), p0.size());
    for (Eigen::Index k = 0; k < p0.size(); ++k) {
        linimm::Vec p = p0;
        p[k] = p0[k] + step;
        linimm::unflatten(p, work);
        const linimm::Vec hi = linimm::forward(work, x);
        p[k] = p0[k] - step;
        linimm::unflatten(p, work);
        const linimm::Vec lo = linimm::forward(work, x);
        jac.col(k) = (hi - lo) / (2.0 * step);
    }
    return jac;
}

}  // namespace oracles
