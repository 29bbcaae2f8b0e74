#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linimm/dynsys.hpp"

namespace linimm {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double h_init = 1e-3;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 5'000'000;
};

/// Uniformly sampled solution of an initial value problem.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::string system_name;

    int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
    std::size_t size() const { return times.size(); }
};

struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what + " (reached t=" + std::to_string(t) + ")"), t_reached(t) {}
    double t_reached;
};

/// Section x[component] = value, crossed with the given sign of d/dt x[component]:
/// +1 upward, -1 downward, 0 either.
struct Section {
    int component = 0;
    double value = 0.0;
    int direction = 0;
};

struct Event {
    double t;
    Vec state;
};

/// Integrate x' = f(x,t) with the adaptive Dormand-Prince 5(4) pair and
/// sample the solution on the uniform grid t0, t0+sample_dt, ... (<= t1)
/// through the 4th-order dense-output interpolant.
Trajectory integrate(const DynamicalSystem& system, const Vec& x0, double t0, double t1,
                     const IntegratorConfig& cfg, double sample_dt);

/// Single fixed-step 5th-order march (no error control); used for order checks.
Vec integrate_fixed(const DynamicalSystem& system, const Vec& x0, double t0, double t1, double h);

/// Integrate the state together with the variational equations M' = J(x,t) M,
/// M(t0) = I. Returns the sampled trajectory and the fundamental solution
/// matrix at t1. Requires system.jacobian.
std::pair<Trajectory, Mat> integrate_variational(const DynamicalSystem& system, const Vec& x0,
                                                 double t0, double t1, const IntegratorConfig& cfg,
                                                 double sample_dt);

/// First transversal crossing of the section strictly after t0, located on the
/// dense-output interpolant. Returns std::nullopt when no crossing occurs
/// before t_max.
std::optional<Event> find_crossing(const DynamicalSystem& system, const Vec& x0, double t0,
                                   double t_max, const IntegratorConfig& cfg, const Section& section);

/// All section crossings in (t0, t_max], in time order.
std::vector<Event> find_crossings(const DynamicalSystem& system, const Vec& x0, double t0,
                                  double t_max, const IntegratorConfig& cfg, const Section& section);

}  // namespace linimm
