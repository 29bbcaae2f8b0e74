#include "linimm/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace linimm {

namespace {
constexpr double kPi = M_PI;
constexpr double kTwoPi = 2.0 * M_PI;
}  // namespace

std::pair<double, double> to_polar(const Eigen::Vector2d& state) {
    const double r = state.norm();
    if (r == 0.0) return {0.0, 0.0};
    double theta = std::atan2(state[0], state[1]);
    if (theta < 0.0) theta += kTwoPi;
    return {r, theta};
}

Eigen::Vector2d from_polar(double r, double theta) {
    return {r * std::sin(theta), r * std::cos(theta)};
}

double wrap_2pi(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

Eigen::Vector3d polar_sincos_encode(const Eigen::Vector2d& state, const Eigen::Vector2d& center) {
    const Eigen::Vector2d d = state - center;
    const double r = d.norm();
    if (r == 0.0) return {0.0, 0.0, 1.0};
    return {r, d[0] / r, d[1] / r};
}

Eigen::Vector2d polar_sincos_decode(const Eigen::Vector3d& enc, const Eigen::Vector2d& center) {
    const double theta = std::atan2(enc[1], enc[2]);
    return center + from_polar(enc[0], theta);
}

const char* to_string(Encoding e) {
    switch (e) {
        case Encoding::PolarSinCos: return "PolarSinCos";
        case Encoding::CartesianPlusLabel: return "CartesianPlusLabel";
        case Encoding::PolarLCDeviation: return "PolarLCDeviation";
        case Encoding::DampedDeviation: return "DampedDeviation";
    }
    return "unknown";
}

Encoding encoding_from_string(const std::string& s) {
    if (s == "PolarSinCos") return Encoding::PolarSinCos;
    if (s == "CartesianPlusLabel") return Encoding::CartesianPlusLabel;
    if (s == "PolarLCDeviation") return Encoding::PolarLCDeviation;
    if (s == "DampedDeviation") return Encoding::DampedDeviation;
    throw std::invalid_argument("unknown encoding '" + s + "'");
}

double duffing_label(const Eigen::Vector2d& state) {
    const double E = 0.5 * state[1] * state[1] - 0.5 * state[0] * state[0] +
                     0.25 * state[0] * state[0] * state[0] * state[0];
    if (E >= 0.0) return 0.0;
    return state[0] > 0.0 ? 1.0 : -1.0;
}

double pendulum_period(double E, const IntegratorConfig& cfg) {
    if (!(E > -1.0 && E < 1.0))
        throw std::invalid_argument("pendulum_period: energy must lie in (-1, 1)");
    const DynamicalSystem sys = make_system("pendulum");
    Vec x0(2);
    x0 << std::acos(-E), 0.0;
    const auto half = find_crossing(sys, x0, 0.0, 100.0, cfg, Section{1, 0.0, +1});
    if (!half) throw std::runtime_error("pendulum_period: no half-period crossing found");
    return 2.0 * half->t;
}

Eigen::Vector2d duffing_orbit_start(double E, double label) {
    if (label == 0.0) {
        if (!(E > 0.0)) throw std::invalid_argument("duffing_orbit_start: outer family needs E > 0");
        return {std::sqrt(1.0 + std::sqrt(1.0 + 4.0 * E)), 0.0};
    }
    if (!(E > -0.25 && E < 0.0))
        throw std::invalid_argument("duffing_orbit_start: intrawell family needs E in (-1/4, 0)");
    if (label > 0.0) return {std::sqrt(1.0 + std::sqrt(1.0 + 4.0 * E)), 0.0};
    return {-std::sqrt(1.0 - std::sqrt(1.0 + 4.0 * E)), 0.0};
}

double duffing_period(double E, const IntegratorConfig& cfg) {
    const DynamicalSystem sys = make_system("duffing_cons");
    const Eigen::Vector2d start = duffing_orbit_start(E, E < 0.0 ? 1.0 : 0.0);
    const auto half = find_crossing(sys, start, 0.0, 200.0, cfg, Section{1, 0.0, +1});
    if (!half) throw std::runtime_error("duffing_period: no half-period crossing found");
    return 2.0 * half->t;
}

// --- Pendulum ------------------------------------------------------------------

PairedDataset pendulum_pair(const std::vector<double>& energies, int samples_per_orbit,
                            const IntegratorConfig& cfg) {
    const DynamicalSystem sys = make_system("pendulum");
    const int n = samples_per_orbit;
    PairedDataset ds;
    ds.experiment = "pendulum";
    ds.x_samples.resize(static_cast<Eigen::Index>(energies.size()) * n, 3);
    ds.y_samples.resize(ds.x_samples.rows(), 3);
    ds.period_targets = Vec(ds.x_samples.rows());

    Eigen::Index row = 0;
    for (const double E : energies) {
        const double a = std::acos(-E);
        const double T = pendulum_period(E, cfg);
        Vec x0(2);
        x0 << a, 0.0;
        const Trajectory traj = integrate(sys, x0, 0.0, T, cfg, T / n);
        for (int k = 0; k < n; ++k) {
            ds.x_samples.row(row) =
                polar_sincos_encode(traj.states[k].head<2>()).transpose();
            const double th_l = 0.5 * kPi + kTwoPi * k / n;
            ds.y_samples.row(row) << a, std::sin(th_l), std::cos(th_l);
            (*ds.period_targets)[row] = T;
            ++row;
        }
    }
    return ds;
}

PairedDataset pendulum_pair(double e_min, double e_max, int n_orbits, int samples_per_orbit,
                            const IntegratorConfig& cfg) {
    if (!(e_min > -1.0 && e_max < 1.0 && e_min < e_max))
        throw std::invalid_argument("pendulum_pair: energy range must lie inside (-1, 1)");
    // Uniform in orbit amplitude a = arccos(-E) for even phase-space coverage.
    const double a_min = std::acos(-e_min), a_max = std::acos(-e_max);
    std::vector<double> energies;
    for (int i = 0; i < n_orbits; ++i) {
        const double a = a_min + (a_max - a_min) * i / (n_orbits - 1.0);
        energies.push_back(-std::cos(a));
    }
    return pendulum_pair(energies, samples_per_orbit, cfg);
}

Trajectory reconstruct_pendulum(const ImmersionModel& model, double r0, double theta0,
                                const std::vector<double>& t_grid, const PendulumReconOpts& opts) {
    if (!opts.ablate_period && !model.period_net)
        throw std::runtime_error("reconstruct_pendulum: model has no trained period network");

    double T_p = 0.0;
    if (!opts.ablate_period) {
        Eigen::Vector3d enc0(r0, std::sin(theta0), std::cos(theta0));
        T_p = model.period_net->eval(enc0)[0];
    }

    Trajectory traj;
    traj.system_name = "pendulum";
    const double t0 = t_grid.front();
    for (const double t : t_grid) {
        const double elapsed = opts.omega * (t - t0);
        const double th_arg =
            opts.ablate_period ? theta0 + elapsed : theta0 + elapsed * kTwoPi / (opts.omega * T_p);
        Eigen::Vector3d enc(r0, std::sin(th_arg), std::cos(th_arg));
        const Vec out = model.phi_inv.eval(enc);
        traj.times.push_back(t);
        traj.states.push_back(polar_sincos_decode(Eigen::Vector3d(out)));
    }
    return traj;
}

std::pair<double, double> pendulum_phi(const ImmersionModel& model, const Eigen::Vector2d& x0) {
    const Vec out = model.phi.eval(polar_sincos_encode(x0));
    return {out[0], wrap_2pi(std::atan2(out[1], out[2]))};
}

// --- Conservative Duffing ------------------------------------------------------

namespace {

Eigen::Vector2d duffing_center(double label) {
    if (label > 0.0) return {1.0, 0.0};
    if (label < 0.0) return {-1.0, 0.0};
    return {0.0, 0.0};
}

void append_duffing_orbit(PairedDataset& ds, Eigen::Index& row, const DynamicalSystem& sys,
                          double E, double label, int n, const IntegratorConfig& cfg) {
    const Eigen::Vector2d start = duffing_orbit_start(E, label);
    const Eigen::Vector2d center = duffing_center(label);
    const double a = start[0] - center[0];
    const double T = duffing_period(E, cfg);
    Vec x0(2);
    x0 << start[0], start[1];
    const Trajectory traj = integrate(sys, x0, 0.0, T, cfg, T / n);
    for (int k = 0; k < n; ++k) {
        const auto& s = traj.states[k];
        ds.x_samples.row(row) << s[0], s[1], label;
        const double th_l = 0.5 * kPi + kTwoPi * k / n;
        const Eigen::Vector2d y = center + from_polar(a, th_l);
        ds.y_samples.row(row) << y[0] - center[0], y[1] - center[1], label;
        (*ds.period_targets)[row] = T;
        ++row;
    }
}

}  // namespace

PairedDataset duffing_pair(const std::vector<double>& well_energies,
                           const std::vector<double>& outer_energies, int samples_per_orbit,
                           const IntegratorConfig& cfg) {
    const DynamicalSystem sys = make_system("duffing_cons");
    const int n = samples_per_orbit;
    PairedDataset ds;
    ds.experiment = "duffing_cons";
    const Eigen::Index rows =
        static_cast<Eigen::Index>(2 * well_energies.size() + outer_energies.size()) * n;
    ds.x_samples.resize(rows, 3);
    ds.y_samples.resize(rows, 3);
    ds.period_targets = Vec(rows);

    Eigen::Index row = 0;
    for (const double E : well_energies) {
        append_duffing_orbit(ds, row, sys, E, +1.0, n, cfg);
        append_duffing_orbit(ds, row, sys, E, -1.0, n, cfg);
    }
    for (const double E : outer_energies) append_duffing_orbit(ds, row, sys, E, 0.0, n, cfg);
    return ds;
}

Trajectory reconstruct_duffing(const ImmersionModel& model, const Eigen::Vector3d& y0,
                               const std::vector<double>& t_grid) {
    if (!model.period_net)
        throw std::runtime_error("reconstruct_duffing: model has no trained period network");
    const double label = y0[2];
    const auto [r_l, th0] = to_polar(y0.head<2>());
    const double T = model.period_net->eval(y0)[0];

    Trajectory traj;
    traj.system_name = "duffing_cons";
    const double t0 = t_grid.front();
    for (const double t : t_grid) {
        const double th_arg = th0 + kTwoPi * (t - t0) / T;
        const Eigen::Vector2d y = from_polar(r_l, th_arg);
        Vec in(3);
        in << y[0], y[1], label;
        const Vec out = model.phi_inv.eval(in);
        Vec state(3);
        state << out[0], out[1], label;  // the label coordinate is carried
        traj.times.push_back(t);
        traj.states.push_back(state);
    }
    return traj;
}

Eigen::Vector3d duffing_phi(const ImmersionModel& model, const Eigen::Vector2d& x0) {
    const double label = duffing_label(x0);
    Vec in(3);
    in << x0[0], x0[1], label;
    const Vec out = model.phi.eval(in);
    return {out[0], out[1], label};
}

// --- Van der Pol -----------------------------------------------------------------

double VdpCycle::radius_at(double th) const {
    const double t = wrap_2pi(th);
    const auto it = std::upper_bound(theta.begin(), theta.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - theta.begin());
    double th_lo, th_hi, r_lo, r_hi;
    if (hi == 0 || hi == theta.size()) {
        // Wraparound segment between the last and first table entries.
        th_lo = theta.back() - kTwoPi;
        r_lo = radius.back();
        th_hi = theta.front();
        r_hi = radius.front();
        const double tt = hi == 0 ? t : t - kTwoPi;
        const double w = (tt - th_lo) / (th_hi - th_lo);
        return r_lo + w * (r_hi - r_lo);
    }
    th_lo = theta[hi - 1];
    r_lo = radius[hi - 1];
    th_hi = theta[hi];
    r_hi = radius[hi];
    const double w = (t - th_lo) / (th_hi - th_lo);
    return r_lo + w * (r_hi - r_lo);
}

VdpCycle vdp_limit_cycle(const IntegratorConfig& cfg) {
    const DynamicalSystem sys = make_system("vdp");
    Vec seed(2);
    seed << 2.0, 0.0;
    const Trajectory settle = integrate(sys, seed, 0.0, 80.0, cfg, 80.0);

    // Anchor at the rightmost cycle point (downward x2-crossing with x1 > 0).
    // The gap between consecutive crossings is insensitive to the converged
    // state sitting exactly on the section.
    const Section sec{1, 0.0, -1};
    const auto events = find_crossings(sys, settle.states.back(), 0.0, 21.0, cfg, sec);
    if (events.size() < 2) throw std::runtime_error("vdp_limit_cycle: too few section crossings");

    VdpCycle cycle;
    cycle.period = events.back().t - events[events.size() - 2].t;
    cycle.anchor = events.back().state;

    const int n = 2048;
    const Trajectory orbit =
        integrate(sys, anchor->state, 0.0, cycle.period, cfg, cycle.period / n);
    std::vector<std::pair<double, double>> samples;  // (theta, r)
    double prev_unwrapped = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto [r, th] = to_polar(orbit.states[k].head<2>());
        double u = th;
        if (k > 0) {
            while (u < prev_unwrapped) u += kTwoPi;
            if (u - prev_unwrapped > kPi)
                throw std::runtime_error("vdp_limit_cycle: cycle is not star-shaped about the origin");
        }
        prev_unwrapped = u;
        samples.emplace_back(wrap_2pi(th), r);
    }
    std::sort(samples.begin(), samples.end());
    for (const auto& [th, r] : samples) {
        cycle.theta.push_back(th);
        cycle.radius.push_back(r);
    }
    return cycle;
}

PairedDataset vdp_pair(const std::vector<Eigen::Vector2d>& ics, const VdpCycle& cycle,
                       const VdpPairConfig& cfg) {
    const DynamicalSystem sys = make_system("vdp");
    const int n = cfg.samples;
    PairedDataset ds;
    ds.experiment = "vdp";
    ds.x_samples.resize(static_cast<Eigen::Index>(ics.size()) * n, 2);
    ds.y_samples.resize(ds.x_samples.rows(), 2);

    Eigen::Index row = 0;
    for (const auto& ic : ics) {
        const auto [r0, th0] = to_polar(ic);
        if (r0 < 1e-9)
            throw std::invalid_argument("vdp_pair: initial condition at the unstable fixed point");
        const double y1_0 = r0 / cycle.radius_at(th0);
        const double dt = cfg.horizon / (n - 1);
        const Trajectory traj = integrate(sys, Vec(ic), 0.0, cfg.horizon, cfg.ode, dt);
        for (int k = 0; k < n; ++k) {
            const double t = traj.times[k];
            const double y1 = 1.0 + (y1_0 - 1.0) * std::exp(-cfg.D * t);
            const double th = th0 + cfg.Omega * t;
            ds.x_samples.row(row) = traj.states[k].head<2>().transpose();
            ds.y_samples.row(row) << y1 * std::sin(th), y1 * std::cos(th);
            ++row;
        }
    }
    return ds;
}

Trajectory reconstruct_vdp(const ImmersionModel& model, double y1_0, double theta0,
                           const std::vector<double>& t_grid) {
    const double D = model.linear.params.at("D");
    const double Om = model.linear.params.at("Omega");
    Trajectory traj;
    traj.system_name = "vdp";
    const double t0 = t_grid.front();
    for (const double t : t_grid) {
        const double y1 = 1.0 + (y1_0 - 1.0) * std::exp(-D * (t - t0));
        const double th = theta0 + Om * (t - t0);
        Vec in(2);
        in << y1 * std::sin(th), y1 * std::cos(th);
        traj.times.push_back(t);
        traj.states.push_back(model.phi_inv.eval(in));
    }
    return traj;
}

std::pair<double, double> vdp_phi(const ImmersionModel& model, const Eigen::Vector2d& x0) {
    const Vec out = model.phi.eval(x0);
    const auto [r, th] = to_polar(Eigen::Vector2d(out[0], out[1]));
    return {r, th};
}

// --- Forced-damped Duffing -------------------------------------------------------

namespace {

// Closed-form evolution of y'' + c y' + w^2 y = 0 (underdamped).
Eigen::Vector2d damped_osc_evolve(const Eigen::Vector2d& y0, double c, double w, double t) {
    const double alpha = 0.5 * c;
    const double wd = std::sqrt(w * w - alpha * alpha);
    const double A = y0[0];
    const double B = (y0[1] + alpha * y0[0]) / wd;
    const double e = std::exp(-alpha * t);
    const double cs = std::cos(wd * t), sn = std::sin(wd * t);
    const double y = e * (A * cs + B * sn);
    const double v = e * ((-alpha * A + wd * B) * cs - (wd * A + alpha * B) * sn);
    return {y, v};
}

}  // namespace

PairedDataset duffing_fd_pair(const DynamicalSystem& system,
                              const std::vector<Eigen::Vector2d>& ics,
                              const std::vector<ForcedAttractor>& attractors,
                              const RegionSet& region, const DuffingFdPairConfig& cfg) {
    if (attractors.size() != 2)
        throw std::invalid_argument("duffing_fd_pair: expected exactly two attractors");
    const double Omega = system.params.at("Omega");
    const double T = 2.0 * M_PI / Omega;
    const int n = cfg.samples_per_period;
    const auto region_pts = region.all_points();

    PairedDataset ds;
    ds.experiment = "duffing_fd";
    ds.x_samples.resize(static_cast<Eigen::Index>(ics.size()) * n, 4);
    ds.y_samples.resize(ds.x_samples.rows(), 5);

    Eigen::Index row = 0;
    int excluded = 0;
    for (const auto& ic : ics) {
        const int label = classify_basin(system, attractors, ic, cfg.label_periods, cfg.ode);
        const Eigen::Vector2d dev0 = ic - attractors[label].fixed_point;
        Vec x0(3);
        x0 << ic[0], ic[1], 0.0;
        const double dt = T / (n - 1);
        const Trajectory traj = integrate(system, x0, 0.0, T, cfg.ode, dt);

        // Samples leaving the tracked region indicate insufficient coverage.
        bool escaped = false;
        for (const auto& s : traj.states) {
            if (region.rect.contains(s[0], s[1])) continue;
            double best = std::numeric_limits<double>::infinity();
            const Eigen::Vector2d q(s[0], s[1]);
            for (const auto& p : region_pts) best = std::min(best, (p - q).squaredNorm());
            if (best > 0.1 * 0.1 * 1.5 * 1.5) {
                escaped = true;
                break;
            }
        }
        if (escaped) {
            ++excluded;
            continue;
        }

        for (int k = 0; k < n; ++k) {
            const double t = traj.times[k];
            const auto& s = traj.states[k];
            const Eigen::Vector2d y = damped_osc_evolve(dev0, cfg.c_l, cfg.omega_l, t);
            ds.x_samples.row(row) << s[0], s[1], std::sin(s[2]), std::cos(s[2]);
            ds.y_samples.row(row) << y[0], y[1], std::sin(Omega * t), std::cos(Omega * t),
                static_cast<double>(label);
            ++row;
        }
    }
    if (excluded > 0) {
        std::cerr << "duffing_fd_pair: warning, excluded " << excluded
                  << " trajectories escaping the tracked region\n";
        ds.x_samples.conservativeResize(row, Eigen::NoChange);
        ds.y_samples.conservativeResize(row, Eigen::NoChange);
    }
    return ds;
}

Trajectory reconstruct_duffing_fd(const ImmersionModel& model, const Eigen::Vector4d& y0,
                                  const std::vector<double>& t_grid) {
    const double c_l = model.linear.params.at("c_l");
    const double w_l = model.linear.params.at("omega_l");
    const double Om = model.linear.params.at("Omega");

    Trajectory traj;
    traj.system_name = "duffing_fd";
    const double t0 = t_grid.front();
    for (const double t : t_grid) {
        const Eigen::Vector2d y = damped_osc_evolve(y0.head<2>(), c_l, w_l, t - t0);
        const double y3 = y0[2] + Om * (t - t0);
        Vec in(5);
        in << y[0], y[1], std::sin(y3), std::cos(y3), y0[3];
        const Vec out = model.phi_inv.eval(in);
        Vec state(3);
        state << out[0], out[1], y3;  // forcing phase is carried
        traj.times.push_back(t);
        traj.states.push_back(state);
    }
    return traj;
}

Eigen::Vector4d duffing_fd_phi(const ImmersionModel& model, const Eigen::Vector2d& x0) {
    Vec in(4);
    in << x0[0], x0[1], 0.0, 1.0;  // forcing phase 0
    const Vec out = model.phi.eval(in);
    const double label = out[2] < 0.5 ? 0.0 : 1.0;
    return {out[0], out[1], 0.0, label};
}

// --- Model bundle I/O --------------------------------------------------------------

namespace {

nlohmann::json linear_to_json(const LinearSystemSpec& spec) {
    nlohmann::json j;
    switch (spec.kind) {
        case LinearSystemSpec::Kind::Matrix: j["kind"] = "Matrix"; break;
        case LinearSystemSpec::Kind::Harmonic: j["kind"] = "Harmonic"; break;
        case LinearSystemSpec::Kind::ExtendedHarmonic: j["kind"] = "ExtendedHarmonic"; break;
        case LinearSystemSpec::Kind::LinearLimitCycle: j["kind"] = "LinearLimitCycle"; break;
        case LinearSystemSpec::Kind::DampedExtended: j["kind"] = "DampedExtended"; break;
    }
    j["params"] = spec.params;
    if (spec.matrix) {
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < spec.matrix->rows(); ++i) {
            std::vector<double> r;
            for (Eigen::Index k = 0; k < spec.matrix->cols(); ++k) r.push_back((*spec.matrix)(i, k));
            rows.push_back(std::move(r));
        }
        j["matrix"] = rows;
    }
    return j;
}

LinearSystemSpec linear_from_json(const nlohmann::json& j) {
    LinearSystemSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "Matrix") spec.kind = LinearSystemSpec::Kind::Matrix;
    else if (kind == "Harmonic") spec.kind = LinearSystemSpec::Kind::Harmonic;
    else if (kind == "ExtendedHarmonic") spec.kind = LinearSystemSpec::Kind::ExtendedHarmonic;
    else if (kind == "LinearLimitCycle") spec.kind = LinearSystemSpec::Kind::LinearLimitCycle;
    else if (kind == "DampedExtended") spec.kind = LinearSystemSpec::Kind::DampedExtended;
    else throw std::invalid_argument("unknown linear system kind '" + kind + "'");
    spec.params = j.at("params").get<std::map<std::string, double>>();
    if (j.contains("matrix")) {
        const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
        Mat A(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].size(); ++k) A(i, k) = rows[i][k];
        spec.matrix = A;
    }
    return spec;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace

void save_model(const ImmersionModel& model, const std::string& dir) {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    write_json(root / "phi.json", scaled_mlp_to_json(model.phi));
    write_json(root / "phi_inv.json", scaled_mlp_to_json(model.phi_inv));
    if (model.period_net) write_json(root / "period.json", scaled_mlp_to_json(*model.period_net));
    nlohmann::json meta;
    meta["experiment"] = model.experiment;
    meta["encoding"] = to_string(model.encoding);
    meta["linear"] = linear_to_json(model.linear);
    write_json(root / "meta.json", meta);
}

ImmersionModel load_model(const std::string& dir) {
    const std::filesystem::path root(dir);
    ImmersionModel model;
    model.phi = scaled_mlp_from_json(read_json(root / "phi.json"));
    model.phi_inv = scaled_mlp_from_json(read_json(root / "phi_inv.json"));
    if (std::filesystem::exists(root / "period.json"))
        model.period_net = scaled_mlp_from_json(read_json(root / "period.json"));
    const nlohmann::json meta = read_json(root / "meta.json");
    model.experiment = meta.at("experiment").get<std::string>();
    model.encoding = encoding_from_string(meta.at("encoding").get<std::string>());
    model.linear = linear_from_json(meta.at("linear"));
    return model;
}

// --- Eigenfunction fields -----------------------------------------------------------

KoopmanEigenfield koopman_eigenfield(const ImmersionModel& model, const Mat& grid_states) {
    Mat A;
    try {
        A = model.linear.as_matrix();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("koopman_eigenfield: ") + e.what());
    }

    std::function<Vec(const Vec&)> phi_cart;
    switch (model.encoding) {
        case Encoding::PolarSinCos:
            phi_cart = [&model](const Vec& x) -> Vec {
                const Vec out = model.phi.eval(polar_sincos_encode(x.head<2>()));
                const double th = std::atan2(out[1], out[2]);
                Vec y(2);
                y << out[0] * std::sin(th), out[0] * std::cos(th);
                return y;
            };
            break;
        case Encoding::CartesianPlusLabel:
            phi_cart = [&model](const Vec& x) -> Vec {
                const double label = duffing_label(x.head<2>());
                Vec in(3);
                in << x[0], x[1], label;
                const Vec out = model.phi.eval(in);
                Vec y(3);
                y << out[0], out[1], label;
                return y;
            };
            break;
        default:
            throw std::runtime_error(
                "koopman_eigenfield: no diagonalizable linear prototype for experiment '" +
                model.experiment + "'");
    }
    return koopman_eigenfield(A, phi_cart, grid_states);
}

}  // namespace linimm
