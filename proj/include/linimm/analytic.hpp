#pragma once

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "linimm/odeint.hpp"

namespace linimm {

/// Observable pair (f_r, f_phi) over the polar coordinates of a frequency-
/// omega harmonic oscillator, together with the theta-partials entering the
/// chain-rule right-hand side and (where available) the inverse map back to
/// (r, theta).
struct HarmonicFamily {
    double omega = 1.0;
    std::function<double(double r, double th)> f_r, f_phi;
    std::function<double(double r, double th)> df_r_dth, df_phi_dth;
    std::function<std::pair<double, double>(const Eigen::Vector2d&)> inverse;
};

/// Planar system whose coordinates are the observables of the harmonic
/// oscillator; rhs = omega * (df_r/dth, df_phi/dth) at (r, th) = inverse(x).
/// Without an inverse a warning is emitted and the rhs throws when called.
DynamicalSystem build_harmonic_family(const HarmonicFamily& fam);

/// f_r = r, f_phi = theta (1 - sin(pi r / 2)): radially varying frequency
/// Omega(r) = omega (1 - sin(pi r / 2)).
HarmonicFamily default_harmonic_family(double omega = 1.0);

struct AnalyticReport {
    std::string case_name;
    double max_error = 0.0;
    bool pass = false;
    nlohmann::json details;
};

/// Checks the default radially-varying-frequency example: endpoint
/// frequencies, identity-observable recovery of the harmonic oscillator, and
/// the trajectory round trip through the inverse observables.
AnalyticReport verify_harmonic_family_case(double tolerance, const IntegratorConfig& cfg = {});

/// Integrates the planar limit-cycle system and checks its radius/angle
/// observables against the closed-form linear solution and the 3-D lift on
/// the slice y3 = 1.
AnalyticReport verify_limit_cycle_case(double tolerance, const IntegratorConfig& cfg = {});

/// Integrates the polar form of y' = diag(lambda1, lambda2) y and checks the
/// observables y1 = x1 sin x2, y2 = x1 cos x2 against exponential decay, the
/// invariant rays at multiples of pi/2, and their stability.
AnalyticReport verify_coexisting_case(double lambda1, double lambda2, double tolerance,
                                      const IntegratorConfig& cfg = {});

}  // namespace linimm
