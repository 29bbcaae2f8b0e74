#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "linimm/odeint.hpp"

namespace linimm {

struct PeriodEstimate {
    double period = 0.0;
    double stddev = 0.0;
    int n_gaps = 0;
};

/// Mean gap between successive same-direction section crossings after the
/// transient. Throws when fewer than three crossings are found.
PeriodEstimate detect_period(const DynamicalSystem& system, const Vec& ic, const Section& section,
                             double transient_skip, double horizon,
                             const IntegratorConfig& cfg = {});

/// Dominant angular frequency of a decaying oscillation, from the
/// zero-upcrossings of the first state component after the transient.
double estimate_decay_frequency(const DynamicalSystem& system, const Vec& ic,
                                double transient_skip, double horizon,
                                const IntegratorConfig& cfg = {});

struct FloquetResult {
    double period = 0.0;
    Eigen::VectorXcd multipliers;
    Mat monodromy;
    Vec cycle_point;
    /// -ln|mu|/T for the nontrivial multiplier farthest from unity.
    double matched_decay_rate = 0.0;
};

struct FloquetOptions {
    /// Treat the period as exact (periodically forced systems): Newton runs on
    /// the stroboscopic map over the non-phase coordinates.
    bool fixed_period = false;
    int phase_index = -1;   // index of the drifting phase coordinate, if any
    int max_newton = 30;
    double newton_tol = 1e-12;
};

/// Monodromy matrix and Floquet multipliers of a periodic orbit. The supplied
/// point is first refined onto the cycle by Newton iteration on a Poincare
/// section (autonomous) or the stroboscopic map (fixed_period).
FloquetResult floquet(const DynamicalSystem& system, const Vec& point_on_cycle, double period,
                      const FloquetOptions& opts = {}, const IntegratorConfig& cfg = {});

struct Rect {
    double x_min, x_max, y_min, y_max;
    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
};

struct RegionSet {
    std::vector<Eigen::Vector2d> grid_points;
    std::vector<Eigen::Vector2d> extension_points;
    Rect rect{};
    double spacing = 0.0;
    bool closed = false;

    std::vector<Eigen::Vector2d> all_points() const;
};

/// Approximation of an inflowing invariant region for a periodically forced
/// planar system (phase as third state). Grid points inside the rectangle are
/// flowed for one forcing period; exit-path samples farther than
/// exit_threshold from the current point set are appended, iterating to a
/// fixed point (bounded by max_rounds).
RegionSet inflowing_region(const DynamicalSystem& system, const Rect& rect, double spacing,
                           double forcing_period, int max_rounds = 20,
                           const IntegratorConfig& cfg = {}, double exit_threshold = 0.1);

/// Stable period-1 orbit of a periodically forced system.
struct ForcedAttractor {
    Eigen::Vector2d fixed_point;  // (x1, x2) at forcing phase 0
    Trajectory orbit;             // one forcing period from the fixed point
    double max_abs_x1 = 0.0;
    FloquetResult floquet;
};

/// Locates the two coexisting attractors of the forced-damped Duffing
/// oscillator by seed scanning plus Newton refinement of the stroboscopic
/// map. Result is sorted by amplitude (low first).
std::vector<ForcedAttractor> find_duffing_fd_attractors(const DynamicalSystem& system,
                                                        const IntegratorConfig& cfg = {});

/// Basin label of an initial condition at forcing phase 0: 0 for the
/// low-amplitude attractor, 1 for the high-amplitude one. Classified by
/// integrating n_periods forcing periods and matching the terminal orbit.
int classify_basin(const DynamicalSystem& system, const std::vector<ForcedAttractor>& attractors,
                   const Eigen::Vector2d& ic, int n_periods = 40,
                   const IntegratorConfig& cfg = {});

/// e(t) = |recon(t) - truth(t)|_2 / max_s |truth(s)|_2 on a shared grid.
std::vector<double> relative_error(const Trajectory& truth, const Trajectory& recon);

/// Symmetric Hausdorff distance between two sampled point sets.
double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

struct KoopmanEigenfield {
    Eigen::VectorXcd eigenvalues;  // sorted by imaginary part, descending
    Mat magnitudes;                // grid rows x eigenvalue columns
    Mat phases;
};

/// Koopman eigenfunction fields z = V^{-1} Phi(x) on the supplied grid
/// states (one row per state). Eigenvectors are unit norm with the first
/// non-negligible component rotated real-positive. Throws for defective A.
KoopmanEigenfield koopman_eigenfield(const Mat& A,
                                     const std::function<Vec(const Vec&)>& phi_cartesian,
                                     const Mat& grid_states);

}  // namespace linimm
