#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace linimm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A finite-dimensional ODE x' = f(x, t) from the benchmark catalogue.
///
/// All catalogue systems are autonomous; the forced Duffing oscillator is
/// carried in its 3-D autonomous extension with the forcing phase as a state.
/// Systems are immutable after construction and safe to evaluate concurrently.
struct DynamicalSystem {
    std::string name;
    int dim = 0;
    std::map<std::string, double> params;
    std::function<Vec(const Vec&, double)> rhs;
    /// Analytic Jacobian of rhs with respect to the state.
    std::function<Mat(const Vec&, double)> jacobian;
    /// First integral, where one exists (pendulum, conservative Duffing, ...).
    std::function<double(const Vec&)> energy_fn;

    bool has_energy() const { return static_cast<bool>(energy_fn); }
};

/// Structured description of a conjugate linear reference system.
struct LinearSystemSpec {
    enum class Kind { Matrix, Harmonic, ExtendedHarmonic, LinearLimitCycle, DampedExtended };

    Kind kind = Kind::Harmonic;
    std::optional<Mat> matrix;                 // required iff kind == Matrix
    std::map<std::string, double> params;      // omega, D, Omega, c_l, omega_l

    int dim() const;
    /// Right-hand side of the prototype (affine terms included for the
    /// limit-cycle and damped-extended prototypes).
    Vec rhs(const Vec& y) const;
    /// Dense matrix A with y' = A y. Throws for prototypes that are affine or
    /// have no pure-matrix form (LinearLimitCycle, DampedExtended).
    Mat as_matrix() const;

    static LinearSystemSpec harmonic(double omega = 1.0);
    static LinearSystemSpec extended_harmonic(double omega = 1.0);
    static LinearSystemSpec linear_limit_cycle(double D, double Omega);
    static LinearSystemSpec damped_extended(double c_l, double omega_l, double Omega);
    static LinearSystemSpec from_matrix(const Mat& A);
};

/// Build a catalogue system by name. Recognized names:
///   pendulum, linear_osc, duffing_cons, ext_linear_osc, vdp,
///   linear_limit_cycle, duffing_fd, damped_ext_linear, harmonic_w,
///   app_lc, app_coexist.
/// Missing required parameters raise std::invalid_argument naming the
/// parameter; unknown names raise std::invalid_argument.
DynamicalSystem make_system(const std::string& name,
                            const std::map<std::string, double>& params = {});

/// Scalar first integral of the state; throws std::invalid_argument
/// ("no first integral") if the system has none.
double energy(const DynamicalSystem& system, const Vec& state);

}  // namespace linimm
