#pragma once

#include <functional>
#include <vector>

#include "linimm/mlp.hpp"

namespace linimm {

struct LmConfig {
    double mu_init = 1e-3;
    double mu_factor = 10.0;
    double mu_max = 1e10;
    double grad_tol = 1e-8;
    double step_tol = 1e-10;
    int max_iters = 500;
};

enum class LmStop { GradSmall, StepSmall, MuMax, MaxIters };

struct TrainLogRow {
    int iter;
    double loss;  // sum of squared residuals at the start of the iteration
    double mu;
    bool accepted;
};

struct LmReport {
    int iterations = 0;
    std::vector<double> loss_history;  // losses of the initial point and each accepted step
    LmStop terminal_reason = LmStop::MaxIters;
    std::vector<TrainLogRow> log;

    double final_loss() const { return loss_history.back(); }
};

/// Nonlinear least-squares problem in normal-equation form. `normal_eqs`
/// fills J^T J and J^T r at the given parameters and returns the loss
/// sum(r^2); `loss` evaluates the objective alone (used for trial steps).
struct LmProblem {
    int n_params = 0;
    std::function<double(const Vec& p, Mat& JtJ, Vec& Jtr)> normal_eqs;
    std::function<double(const Vec& p)> loss;
};

/// Damped normal-equation solve (J^T J + mu diag(J^T J)) delta = -J^T r by
/// dense LDLT. Zero diagonal entries are damped by mu itself. Throws
/// std::runtime_error when the factorization fails (caller raises mu).
Vec solve_damped_normal(const Mat& JtJ, const Vec& Jtr, double mu);

std::pair<Vec, LmReport> lm_minimize(const LmProblem& problem, const Vec& p0, const LmConfig& cfg);

/// Full-batch Levenberg-Marquardt fit of the network to row-per-sample
/// inputs/targets. Returns the trained parameters and the run report.
std::pair<MlpParams, LmReport> train(const MlpParams& net, const Mat& inputs, const Mat& targets,
                                     const LmConfig& cfg);

const char* to_string(LmStop reason);

}  // namespace linimm
