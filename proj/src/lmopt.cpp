#include "linimm/lmopt.hpp"

#include <cblas.h>

#include <cmath>
#include <stdexcept>

namespace linimm {

Vec solve_damped_normal(const Mat& JtJ, const Vec& Jtr, double mu) {
    Mat A = JtJ;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double d = JtJ(i, i);
        A(i, i) += mu * (d == 0.0 ? 1.0 : d);
    }
    Eigen::LDLT<Mat> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve_damped_normal: factorization failed");
    Vec delta = ldlt.solve(-Jtr);
    if (!delta.allFinite())
        throw std::runtime_error("solve_damped_normal: non-finite solution");
    return delta;
}

std::pair<Vec, LmReport> lm_minimize(const LmProblem& problem, const Vec& p0, const LmConfig& cfg) {
    Vec p = p0;
    Mat JtJ(problem.n_params, problem.n_params);
    Vec Jtr(problem.n_params);

    double loss = problem.normal_eqs(p, JtJ, Jtr);
    if (!std::isfinite(loss)) throw std::runtime_error("lm_minimize: non-finite initial loss");

    LmReport report;
    report.loss_history.push_back(loss);

    const double mu_min = cfg.mu_init * std::pow(cfg.mu_factor, -60.0);
    double mu = cfg.mu_init;
    report.terminal_reason = LmStop::MaxIters;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        if (Jtr.lpNorm<Eigen::Infinity>() < cfg.grad_tol) {
            report.terminal_reason = LmStop::GradSmall;
            break;
        }
        report.iterations = iter;

        bool accepted = false;
        Vec delta;
        while (!accepted) {
            bool solved = true;
            try {
                delta = solve_damped_normal(JtJ, Jtr, mu);
            } catch (const std::runtime_error&) {
                solved = false;
            }
            double trial_loss = std::numeric_limits<double>::quiet_NaN();
            if (solved) trial_loss = problem.loss(p + delta);

            // NaN trial losses compare false and count as rejections.
            if (solved && trial_loss < loss) {
                accepted = true;
                p += delta;
                report.log.push_back({iter, loss, mu, true});
                loss = problem.normal_eqs(p, JtJ, Jtr);
                report.loss_history.push_back(loss);
                mu = std::max(mu / cfg.mu_factor, mu_min);
            } else {
                report.log.push_back({iter, loss, mu, false});
                mu *= cfg.mu_factor;
                if (mu > cfg.mu_max) {
                    report.terminal_reason = LmStop::MuMax;
                    return {std::move(p), std::move(report)};
                }
            }
        }

        if (delta.norm() < cfg.step_tol * (1.0 + p.norm())) {
            report.terminal_reason = LmStop::StepSmall;
            break;
        }
    }
    return {std::move(p), std::move(report)};
}

namespace {

// Accumulates J^T J, J^T r and the loss over sample blocks. The BLAS rank-k
// update on the lower triangle is the dominant cost of a training iteration.
double mlp_normal_eqs(const MlpParams& net, const Mat& inputs, const Mat& targets, Mat& JtJ,
                      Vec& Jtr) {
    const int n = static_cast<int>(inputs.rows());
    const int out = net.out_dim();
    const int p = net.n_params();
    constexpr int kBlock = 256;

    JtJ.setZero();
    Jtr.setZero();
    double loss = 0.0;

    Mat jac_block(kBlock * out, p);
    Vec res_block(kBlock * out);
    for (int start = 0; start < n; start += kBlock) {
        const int m = std::min(kBlock, n - start);
        for (int i = 0; i < m; ++i) {
            const Vec x = inputs.row(start + i).transpose();
            param_jacobian_into(net, x, jac_block.middleRows(i * out, out));
            res_block.segment(i * out, out) =
                forward(net, x) - targets.row(start + i).transpose();
        }
        const auto rows = m * out;
        loss += res_block.head(rows).squaredNorm();
        cblas_dsyrk(CblasColMajor, CblasLower, CblasTrans, p, rows, 1.0, jac_block.data(),
                    static_cast<int>(jac_block.rows()), 1.0, JtJ.data(), p);
        Jtr.noalias() += jac_block.topRows(rows).transpose() * res_block.head(rows);
    }
    JtJ.triangularView<Eigen::StrictlyUpper>() = JtJ.transpose();
    return loss;
}

}  // namespace

std::pair<MlpParams, LmReport> train(const MlpParams& net, const Mat& inputs, const Mat& targets,
                                     const LmConfig& cfg) {
    if (inputs.rows() != targets.rows())
        throw std::invalid_argument("train: inputs and targets row counts differ");
    if (static_cast<int>(inputs.cols()) != net.in_dim() ||
        static_cast<int>(targets.cols()) != net.out_dim())
        throw std::invalid_argument("train: dataset dimensions do not match the network");

    MlpParams work = net;
    LmProblem problem;
    problem.n_params = net.n_params();
    problem.normal_eqs = [&work, &inputs, &targets](const Vec& p, Mat& JtJ, Vec& Jtr) {
        unflatten(p, work);
        return mlp_normal_eqs(work, inputs, targets, JtJ, Jtr);
    };
    problem.loss = [&work, &inputs, &targets](const Vec& p) {
        unflatten(p, work);
        return (forward_batch(work, inputs) - targets).squaredNorm();
    };

    auto [p_final, report] = lm_minimize(problem, flatten(net), cfg);
    MlpParams trained = net;
    unflatten(p_final, trained);
    return {std::move(trained), std::move(report)};
}

const char* to_string(LmStop reason) {
    switch (reason) {
        case LmStop::GradSmall: return "GradSmall";
        case LmStop::StepSmall: return "StepSmall";
        case LmStop::MuMax: return "MuMax";
        case LmStop::MaxIters: return "MaxIters";
    }
    return "unknown";
}

}  // namespace linimm
