#include "linimm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace linimm {

PeriodEstimate detect_period(const DynamicalSystem& system, const Vec& ic, const Section& section,
                             double transient_skip, double horizon, const IntegratorConfig& cfg) {
    Vec start = ic;
    double t0 = 0.0;
    if (transient_skip > 0.0) {
        const Trajectory warmup = integrate(system, ic, 0.0, transient_skip, cfg, transient_skip);
        start = warmup.states.back();
        t0 = warmup.times.back();
    }
    const auto events = find_crossings(system, start, t0, t0 + horizon, cfg, section);
    if (events.size() < 3)
        throw std::runtime_error("detect_period: fewer than 3 section crossings within horizon");

    std::vector<double> gaps;
    for (std::size_t i = 1; i < events.size(); ++i) gaps.push_back(events[i].t - events[i - 1].t);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    PeriodEstimate est;
    est.period = mean;
    est.stddev = std::sqrt(var / gaps.size());
    est.n_gaps = static_cast<int>(gaps.size());
    return est;
}

double estimate_decay_frequency(const DynamicalSystem& system, const Vec& ic, double transient_skip,
                                double horizon, const IntegratorConfig& cfg) {
    const PeriodEstimate est =
        detect_period(system, ic, Section{0, 0.0, +1}, transient_skip, horizon, cfg);
    return 2.0 * M_PI / est.period;
}

namespace {

Eigen::VectorXcd sorted_eigenvalues(const Eigen::VectorXcd& raw, std::vector<int>& order) {
    order.resize(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&raw](int a, int b) {
        if (raw[a].imag() != raw[b].imag()) return raw[a].imag() > raw[b].imag();
        return raw[a].real() > raw[b].real();
    });
    Eigen::VectorXcd out(raw.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = raw[order[i]];
    return out;
}

std::pair<Vec, Mat> strobe_with_jacobian(const DynamicalSystem& system, const Eigen::Vector2d& u,
                                         double period, const IntegratorConfig& cfg) {
    Vec x0(3);
    x0 << u[0], u[1], 0.0;
    auto [traj, M] = integrate_variational(system, x0, 0.0, period, cfg, period);
    return {traj.states.back(), M};
}

}  // namespace

FloquetResult floquet(const DynamicalSystem& system, const Vec& point_on_cycle, double period,
                      const FloquetOptions& opts, const IntegratorConfig& cfg) {
    FloquetResult res;
    Vec point = point_on_cycle;
    double T = period;

    if (opts.fixed_period) {
        if (system.dim != 3 || opts.phase_index != 2)
            throw std::invalid_argument("floquet: fixed_period expects a planar forced system with "
                                        "the phase as third coordinate");
        Eigen::Vector2d u = point.head<2>();
        bool converged = false;
        for (int it = 0; it < opts.max_newton; ++it) {
            auto [xT, M] = strobe_with_jacobian(system, u, T, cfg);
            const Eigen::Vector2d f = xT.head<2>() - u;
            if (f.norm() < opts.newton_tol) {
                converged = true;
                break;
            }
            const Eigen::Matrix2d J = M.topLeftCorner<2, 2>() - Eigen::Matrix2d::Identity();
            u -= J.fullPivLu().solve(f);
        }
        if (!converged) throw std::runtime_error("floquet: stroboscopic Newton did not converge");
        point = Vec(3);
        point << u[0], u[1], 0.0;
    } else {
        if (system.dim != 2)
            throw std::invalid_argument("floquet: autonomous cycle refinement implemented for planar systems");
        // Section through the current point, normal to the fastest-moving
        // coordinate; scalar Newton (finite-difference secant) on the return map.
        const Vec f0 = system.rhs(point, 0.0);
        const int sec_comp = std::abs(f0[0]) >= std::abs(f0[1]) ? 0 : 1;
        const int free_comp = 1 - sec_comp;
        const int direction = f0[sec_comp] > 0.0 ? +1 : -1;
        const Section section{sec_comp, point[sec_comp], direction};

        auto return_map = [&](double s) -> std::pair<double, double> {
            Vec x = point;
            x[free_comp] = s;
            const auto ev = find_crossing(system, x, 0.0, 3.0 * period, cfg, section);
            if (!ev) throw std::runtime_error("floquet: no section return within 3 periods");
            return {ev->state[free_comp], ev->t};
        };

        double s = point[free_comp];
        bool converged = false;
        for (int it = 0; it < opts.max_newton; ++it) {
            const auto [Ps, Ts] = return_map(s);
            const double g = Ps - s;
            T = Ts;
            if (std::abs(g) < opts.newton_tol * std::max(1.0, std::abs(s))) {
                converged = true;
                break;
            }
            const double ds = 1e-7 * std::max(1.0, std::abs(s));
            const auto [Ps2, Ts2] = return_map(s + ds);
            const double dg = (Ps2 - s - ds - g) / ds;
            s -= g / dg;
        }
        if (!converged) throw std::runtime_error("floquet: section Newton did not converge");
        point[free_comp] = s;
    }

    auto [traj, M] = integrate_variational(system, point, 0.0, T, cfg, T);
    res.period = T;
    res.monodromy = M;
    res.cycle_point = point;

    Eigen::EigenSolver<Mat> es(M);
    std::vector<int> order;
    res.multipliers = sorted_eigenvalues(es.eigenvalues(), order);

    double best_dist = -1.0;
    for (Eigen::Index i = 0; i < res.multipliers.size(); ++i) {
        const double dist = std::abs(res.multipliers[i] - std::complex<double>(1.0, 0.0));
        if (dist > best_dist) {
            best_dist = dist;
            res.matched_decay_rate = -std::log(std::abs(res.multipliers[i])) / T;
        }
    }
    return res;
}

std::vector<Eigen::Vector2d> RegionSet::all_points() const {
    std::vector<Eigen::Vector2d> pts = grid_points;
    pts.insert(pts.end(), extension_points.begin(), extension_points.end());
    return pts;
}

namespace {

double min_dist_sq(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, (p - q).squaredNorm());
    return best;
}

}  // namespace

RegionSet inflowing_region(const DynamicalSystem& system, const Rect& rect, double spacing,
                           double forcing_period, int max_rounds, const IntegratorConfig& cfg,
                           double exit_threshold) {
    RegionSet region;
    region.rect = rect;
    region.spacing = spacing;

    const int nx = static_cast<int>(std::round((rect.x_max - rect.x_min) / spacing)) + 1;
    const int ny = static_cast<int>(std::round((rect.y_max - rect.y_min) / spacing)) + 1;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            region.grid_points.emplace_back(rect.x_min + i * spacing, rect.y_min + j * spacing);

    std::vector<Eigen::Vector2d> all = region.grid_points;
    std::vector<Eigen::Vector2d> frontier = region.grid_points;
    const double thresh_sq = exit_threshold * exit_threshold;
    const double sample_dt = forcing_period / 128.0;

    for (int round = 0; round < max_rounds && !frontier.empty(); ++round) {
        std::vector<Eigen::Vector2d> added;
        for (const auto& p : frontier) {
            Vec x0(3);
            x0 << p[0], p[1], 0.0;
            const Trajectory traj = integrate(system, x0, 0.0, forcing_period, cfg, sample_dt);
            for (const auto& s : traj.states) {
                if (rect.contains(s[0], s[1])) continue;
                const Eigen::Vector2d q(s[0], s[1]);
                if (min_dist_sq(all, q) > thresh_sq) {
                    all.push_back(q);
                    added.push_back(q);
                    region.extension_points.push_back(q);
                }
            }
        }
        if (added.empty()) {
            region.closed = true;
            break;
        }
        frontier = std::move(added);
    }
    if (!region.closed)
        std::cerr << "inflowing_region: warning, not closed after " << max_rounds << " rounds\n";
    return region;
}

std::vector<ForcedAttractor> find_duffing_fd_attractors(const DynamicalSystem& system,
                                                        const IntegratorConfig& cfg) {
    const double Omega = system.params.at("Omega");
    const double T = 2.0 * M_PI / Omega;

    // Seed scan: long integrations settle onto the coexisting period-1 orbits.
    const std::vector<Eigen::Vector2d> seeds = {
        {0.0, 0.0}, {1.0, 0.0}, {0.5, 0.4}, {-0.5, -0.5}, {1.0, -0.8}, {-0.2, 0.5}};
    std::vector<Eigen::Vector2d> endpoints;
    for (const auto& s : seeds) {
        Vec x0(3);
        x0 << s[0], s[1], 0.0;
        const Trajectory t = integrate(system, x0, 0.0, 150.0 * T, cfg, 150.0 * T);
        const Vec xe = t.states.back();
        endpoints.emplace_back(xe[0], xe[1]);
    }
    std::vector<Eigen::Vector2d> guesses;
    for (const auto& e : endpoints) {
        bool fresh = true;
        for (const auto& g : guesses)
            if ((e - g).norm() < 1e-2) fresh = false;
        if (fresh) guesses.push_back(e);
    }
    if (guesses.size() != 2)
        throw std::runtime_error("find_duffing_fd_attractors: expected 2 attractors, found " +
                                 std::to_string(guesses.size()));

    std::vector<ForcedAttractor> attractors;
    for (const auto& g : guesses) {
        FloquetOptions fopts;
        fopts.fixed_period = true;
        fopts.phase_index = 2;
        Vec point(3);
        point << g[0], g[1], 0.0;
        ForcedAttractor att;
        att.floquet = floquet(system, point, T, fopts, cfg);
        att.fixed_point = att.floquet.cycle_point.head<2>();
        att.orbit = integrate(system, att.floquet.cycle_point, 0.0, T, cfg, T / 256.0);
        att.max_abs_x1 = 0.0;
        for (const auto& s : att.orbit.states) att.max_abs_x1 = std::max(att.max_abs_x1, std::abs(s[0]));
        attractors.push_back(std::move(att));
    }
    std::sort(attractors.begin(), attractors.end(),
              [](const ForcedAttractor& a, const ForcedAttractor& b) {
                  return a.max_abs_x1 < b.max_abs_x1;
              });
    return attractors;
}

int classify_basin(const DynamicalSystem& system, const std::vector<ForcedAttractor>& attractors,
                   const Eigen::Vector2d& ic, int n_periods, const IntegratorConfig& cfg) {
    if (attractors.size() != 2)
        throw std::invalid_argument("classify_basin: expected exactly two attractors");
    const double Omega = system.params.at("Omega");
    const double T = 2.0 * M_PI / Omega;

    Vec x0(3);
    x0 << ic[0], ic[1], 0.0;
    const Trajectory settle = integrate(system, x0, 0.0, n_periods * T, cfg, n_periods * T);
    const Trajectory last = integrate(system, settle.states.back(), 0.0, T, cfg, T / 64.0);
    double amp = 0.0;
    for (const auto& s : last.states) amp = std::max(amp, std::abs(s[0]));

    const double threshold = 0.5 * (attractors[0].max_abs_x1 + attractors[1].max_abs_x1);
    return amp < threshold ? 0 : 1;
}

std::vector<double> relative_error(const Trajectory& truth, const Trajectory& recon) {
    if (truth.size() != recon.size() || truth.dim() != recon.dim())
        throw std::invalid_argument("relative_error: trajectory grids differ");
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (std::abs(truth.times[i] - recon.times[i]) > 1e-9)
            throw std::invalid_argument("relative_error: time grids differ");

    double amp = 0.0;
    for (const auto& s : truth.states) amp = std::max(amp, s.norm());
    if (amp == 0.0) amp = 1.0;

    std::vector<double> err(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
        err[i] = (recon.states[i] - truth.states[i]).norm() / amp;
    return err;
}

double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    auto directed = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

KoopmanEigenfield koopman_eigenfield(const Mat& A,
                                     const std::function<Vec(const Vec&)>& phi_cartesian,
                                     const Mat& grid_states) {
    Eigen::EigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("koopman_eigenfield: eigendecomposition failed");

    std::vector<int> order;
    KoopmanEigenfield field;
    field.eigenvalues = sorted_eigenvalues(es.eigenvalues(), order);

    Eigen::MatrixXcd V(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < V.cols(); ++i) {
        Eigen::VectorXcd v = es.eigenvectors().col(order[i]);
        v /= v.norm();
        for (Eigen::Index j = 0; j < v.size(); ++j)
            if (std::abs(v[j]) > 1e-9) {
                v *= std::conj(v[j]) / std::abs(v[j]);
                break;
            }
        V.col(i) = v;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V);
    if (!lu.isInvertible())
        throw std::runtime_error("koopman_eigenfield: matrix A is defective (non-diagonalizable)");
    const Eigen::MatrixXcd V_inv = lu.inverse();

    const Eigen::Index n = grid_states.rows();
    const Eigen::Index m = A.rows();
    field.magnitudes.resize(n, m);
    field.phases.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec y = phi_cartesian(grid_states.row(i).transpose());
        const Eigen::VectorXcd z = V_inv * y.cast<std::complex<double>>();
        for (Eigen::Index k = 0; k < m; ++k) {
            field.magnitudes(i, k) = std::abs(z[k]);
            field.phases(i, k) = std::arg(z[k]);
        }
    }
    return field;
}

}  // namespace linimm
