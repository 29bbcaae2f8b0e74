#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linimm/analysis.hpp"
#include "linimm/lmopt.hpp"

namespace linimm {

/// Polar coordinates with the angle measured from the positive x2-axis
/// toward the positive x1-axis: theta = atan2(x1, x2), mapped to [0, 2pi).
/// The origin maps to (0, 0).
std::pair<double, double> to_polar(const Eigen::Vector2d& state);
Eigen::Vector2d from_polar(double r, double theta);
double wrap_2pi(double theta);

/// (r, sin theta, cos theta) network coordinates of a planar state about a
/// center; the angle never enters a network directly.
Eigen::Vector3d polar_sincos_encode(const Eigen::Vector2d& state,
                                    const Eigen::Vector2d& center = Eigen::Vector2d::Zero());
Eigen::Vector2d polar_sincos_decode(const Eigen::Vector3d& enc,
                                    const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

enum class Encoding { PolarSinCos, CartesianPlusLabel, PolarLCDeviation, DampedDeviation };

const char* to_string(Encoding e);
Encoding encoding_from_string(const std::string& s);

/// Orbit-region label of the conservative Duffing oscillator (third
/// observable): +1/-1 for the right/left well (E < 0), 0 for outer orbits
/// and on the separatrix.
double duffing_label(const Eigen::Vector2d& state);

/// Period of the pendulum orbit at energy E in (-1, 1), from the first
/// upward x2-crossing (half period) of the orbit started at (arccos(-E), 0).
double pendulum_period(double E, const IntegratorConfig& cfg = {});

/// Period of the conservative Duffing orbit at energy E (E < 0: intrawell,
/// E > 0: outer family).
double duffing_period(double E, const IntegratorConfig& cfg = {});

/// Row-aligned training pairs in network coordinates. Label and phase
/// columns appear on both sides; per-direction target columns are selected
/// at training time.
struct PairedDataset {
    Mat x_samples;
    Mat y_samples;
    std::optional<Vec> period_targets;
    std::string experiment;

    std::size_t rows() const { return static_cast<std::size_t>(x_samples.rows()); }
};

struct ImmersionModel {
    ScaledMlp phi;
    ScaledMlp phi_inv;
    std::optional<ScaledMlp> period_net;
    LinearSystemSpec linear;
    Encoding encoding = Encoding::PolarSinCos;
    std::string experiment;
};

void save_model(const ImmersionModel& model, const std::string& dir);
ImmersionModel load_model(const std::string& dir);

// --- Pendulum (PolarSinCos) --------------------------------------------------

/// Columns: x = (r_p, sin th_p, cos th_p), y = (r_l, sin th_l, cos th_l) with
/// r_l = arccos(-E) and the linear angle advanced by normalized phase from
/// the shared start th = pi/2.
PairedDataset pendulum_pair(const std::vector<double>& energies, int samples_per_orbit,
                            const IntegratorConfig& cfg = {});
PairedDataset pendulum_pair(double e_min, double e_max, int n_orbits, int samples_per_orbit,
                            const IntegratorConfig& cfg = {});

struct PendulumReconOpts {
    bool ablate_period = false;  // skip the T_p angle rescale (appendix ablation)
    double omega = 1.0;          // frequency of the conjugate linear oscillator
};

Trajectory reconstruct_pendulum(const ImmersionModel& model, double r0, double theta0,
                                const std::vector<double>& t_grid,
                                const PendulumReconOpts& opts = {});

/// Linear polar coordinates of a pendulum state under the trained embedding.
std::pair<double, double> pendulum_phi(const ImmersionModel& model, const Eigen::Vector2d& x0);

// --- Conservative Duffing (CartesianPlusLabel) --------------------------------

/// Columns: x = (x1, x2, x3 label), y = (y1, y2, y3 label). Orbits start at
/// the turning point right of the family center (origin for outer orbits,
/// (+-1, 0) intrawell); the paired circle radius is that starting deviation.
PairedDataset duffing_pair(const std::vector<double>& well_energies,
                           const std::vector<double>& outer_energies, int samples_per_orbit,
                           const IntegratorConfig& cfg = {});

Trajectory reconstruct_duffing(const ImmersionModel& model, const Eigen::Vector3d& y0,
                               const std::vector<double>& t_grid);

Eigen::Vector3d duffing_phi(const ImmersionModel& model, const Eigen::Vector2d& x0);

/// Starting state of the Duffing orbit at energy E within the labeled family
/// (the turning point right of the family center).
Eigen::Vector2d duffing_orbit_start(double E, double label);

// --- Van der Pol (PolarLCDeviation) -------------------------------------------

/// Limit-cycle geometry: radius as a periodic function of the polar angle,
/// plus the cycle period and anchor point.
struct VdpCycle {
    std::vector<double> theta;  // strictly increasing in [0, 2pi)
    std::vector<double> radius;
    double period = 0.0;
    Vec anchor;

    double radius_at(double theta) const;
};

VdpCycle vdp_limit_cycle(const IntegratorConfig& cfg = {});

struct VdpPairConfig {
    double D = 1.06;
    double Omega = 0.943;
    double horizon = 20.0;
    int samples = 300;
    IntegratorConfig ode;
};

/// Columns: x = (x1, x2), y = (y1 sin y2, y1 cos y2) with y1(0) =
/// |x(0)|/R_cyc(th(0)), y2(0) = th(0), evolved under the linear limit cycle.
PairedDataset vdp_pair(const std::vector<Eigen::Vector2d>& ics, const VdpCycle& cycle,
                       const VdpPairConfig& cfg);

Trajectory reconstruct_vdp(const ImmersionModel& model, double y1_0, double theta0,
                           const std::vector<double>& t_grid);

/// (y1, y2) linear polar initial condition of a VdP state under Phi.
std::pair<double, double> vdp_phi(const ImmersionModel& model, const Eigen::Vector2d& x0);

// --- Forced-damped Duffing (DampedDeviation) -----------------------------------

struct DuffingFdPairConfig {
    double c_l = 0.02;
    double omega_l = 1.3;
    int samples_per_period = 17;
    int label_periods = 40;
    IntegratorConfig ode;
};

/// Columns: x = (x1, x2, sin x3, cos x3), y = (y1, y2, sin y3, cos y3, y4).
/// (y1, y2)(0) is the deviation of the IC from the labeled attractor at
/// forcing phase 0; y4 in {0, 1} is the basin label.
PairedDataset duffing_fd_pair(const DynamicalSystem& system,
                              const std::vector<Eigen::Vector2d>& ics,
                              const std::vector<ForcedAttractor>& attractors,
                              const RegionSet& region, const DuffingFdPairConfig& cfg);

Trajectory reconstruct_duffing_fd(const ImmersionModel& model, const Eigen::Vector4d& y0,
                                  const std::vector<double>& t_grid);

/// (y1, y2, y3=0, y4) with y4 the rounded basin-label output of Phi.
Eigen::Vector4d duffing_fd_phi(const ImmersionModel& model, const Eigen::Vector2d& x0);

/// Eigenfunction fields of the trained embedding on raw planar grid states.
KoopmanEigenfield koopman_eigenfield(const ImmersionModel& model, const Mat& grid_states);

}  // namespace linimm
