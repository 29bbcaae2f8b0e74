#include "linimm/odeint.hpp"

#include <algorithm>
#include <cmath>

namespace linimm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0, e4 = b4 - 393.0 / 640.0,
                 e5 = b5 + 92097.0 / 339200.0, e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;
// Dense-output coefficients (Hairer, Norsett, Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Rhs = std::function<Vec(const Vec&, double)>;

// Continuous extension over one accepted step.
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

class Dopri5 {
  public:
    Dopri5(Rhs rhs, Vec y, double t, const IntegratorConfig& cfg)
        : rhs_(std::move(rhs)), y_(std::move(y)), t_(t), cfg_(cfg) {
        k1_ = rhs_(y_, t_);
        h_ = std::min(cfg.h_init, cfg.h_max);
    }

    double t() const { return t_; }
    const Vec& y() const { return y_; }
    const DenseStep& dense() const { return dense_; }
    bool has_dense() const { return dense_.h != 0.0; }

    // Advances by one accepted, error-controlled step, not beyond t_end.
    // Returns false once t_end has been reached (up to roundoff).
    bool step(double t_end) {
        if (t_end - t_ <= 1e-13 * std::max(1.0, std::abs(t_end))) return false;
        const int n = static_cast<int>(y_.size());
        Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), yerr(n);
        for (;;) {
            if (++n_steps_ > cfg_.max_steps)
                throw IntegrationError("integration failure: max_steps exceeded", t_);
            double h = std::min(h_, t_end - t_);
            if (h < 1e-14 * std::max(1.0, std::abs(t_)))
                throw IntegrationError("integration failure: step size underflow", t_);

            k2 = rhs_(y_ + h * (a21 * k1_), t_ + c2 * h);
            k3 = rhs_(y_ + h * (a31 * k1_ + a32 * k2), t_ + c3 * h);
            k4 = rhs_(y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3), t_ + c4 * h);
            k5 = rhs_(y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4), t_ + c5 * h);
            k6 = rhs_(y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t_ + h);
            ynew = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7 = rhs_(ynew, t_ + h);
            yerr = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err = 0.0;
            for (int i = 0; i < n; ++i) {
                const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                const double e = yerr[i] / sc;
                err += e * e;
            }
            err = std::sqrt(err / n);

            if (err <= 1.0) {
                dense_.t0 = t_;
                dense_.h = h;
                dense_.r1 = y_;
                dense_.r2 = ynew - y_;
                dense_.r3 = h * k1_ - dense_.r2;
                dense_.r4 = dense_.r2 - h * k7 - dense_.r3;
                dense_.r5 = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                t_ += h;
                y_.swap(ynew);
                k1_.swap(k7);  // FSAL
                const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h_ = std::min(h * fac, cfg_.h_max);
                return true;
            }
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        }
    }

  private:
    Rhs rhs_;
    Vec y_, k1_;
    double t_, h_;
    IntegratorConfig cfg_;
    DenseStep dense_;
    long n_steps_ = 0;
};

Trajectory sample_through(Dopri5& stepper, double t0, double t1, double sample_dt,
                          const std::string& name, int state_dim) {
    Trajectory traj;
    traj.system_name = name;
    const double eps = 1e-12 * std::max(1.0, std::abs(t1));
    traj.times.push_back(t0);
    traj.states.push_back(stepper.y().head(state_dim));
    std::size_t next = 1;
    double t_next = t0 + sample_dt;
    while (t_next <= t1 + eps) {
        while (stepper.t() < t_next - eps)
            if (!stepper.step(t1)) break;
        // Grid points within roundoff of t1 evaluate the last interpolant.
        traj.times.push_back(t_next);
        traj.states.push_back(stepper.has_dense() ? Vec(stepper.dense().eval(t_next).head(state_dim))
                                                  : Vec(stepper.y().head(state_dim)));
        ++next;
        t_next = t0 + static_cast<double>(next) * sample_dt;
    }
    return traj;
}

void check_ivp(const DynamicalSystem& system, const Vec& x0, double t0, double t1) {
    if (static_cast<int>(x0.size()) != system.dim)
        throw std::invalid_argument("integrate: initial state dimension mismatch for '" + system.name + "'");
    if (!(t1 > t0)) throw std::invalid_argument("integrate: t1 must exceed t0");
}

}  // namespace

Trajectory integrate(const DynamicalSystem& system, const Vec& x0, double t0, double t1,
                     const IntegratorConfig& cfg, double sample_dt) {
    check_ivp(system, x0, t0, t1);
    if (!(sample_dt > 0.0)) throw std::invalid_argument("integrate: sample_dt must be positive");
    Dopri5 stepper(system.rhs, x0, t0, cfg);
    return sample_through(stepper, t0, t1, sample_dt, system.name, system.dim);
}

Vec integrate_fixed(const DynamicalSystem& system, const Vec& x0, double t0, double t1, double h) {
    check_ivp(system, x0, t0, t1);
    Vec y = x0;
    double t = t0;
    while (t < t1 - 1e-12) {
        const double hs = std::min(h, t1 - t);
        const Vec k1 = system.rhs(y, t);
        const Vec k2 = system.rhs(y + hs * (a21 * k1), t + c2 * hs);
        const Vec k3 = system.rhs(y + hs * (a31 * k1 + a32 * k2), t + c3 * hs);
        const Vec k4 = system.rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * hs);
        const Vec k5 = system.rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * hs);
        const Vec k6 =
            system.rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + hs);
        y += hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        t += hs;
    }
    return y;
}

std::pair<Trajectory, Mat> integrate_variational(const DynamicalSystem& system, const Vec& x0,
                                                 double t0, double t1, const IntegratorConfig& cfg,
                                                 double sample_dt) {
    if (t1 == t0) {
        Trajectory traj;
        traj.system_name = system.name;
        traj.times.push_back(t0);
        traj.states.push_back(x0);
        return {std::move(traj), Mat::Identity(system.dim, system.dim)};
    }
    check_ivp(system, x0, t0, t1);
    if (!system.jacobian)
        throw std::invalid_argument("integrate_variational: system '" + system.name +
                                    "' has no analytic Jacobian");
    const int n = system.dim;
    Vec z0(n + n * n);
    z0.head(n) = x0;
    Eigen::Map<Mat>(z0.data() + n, n, n) = Mat::Identity(n, n);

    auto rhs = [&system, n](const Vec& z, double t) {
        Vec dz(z.size());
        const Vec x = z.head(n);
        dz.head(n) = system.rhs(x, t);
        const Mat J = system.jacobian(x, t);
        Eigen::Map<Mat>(dz.data() + n, n, n) =
            J * Eigen::Map<const Mat>(z.data() + n, n, n);
        return dz;
    };

    Dopri5 stepper(rhs, z0, t0, cfg);
    Trajectory traj = sample_through(stepper, t0, t1, sample_dt, system.name, n);
    // March the stepper to t1 exactly for the fundamental matrix.
    while (stepper.step(t1)) {}
    const Vec z_end = stepper.t() > t1 ? Vec(stepper.dense().eval(t1)) : stepper.y();
    Mat M = Eigen::Map<const Mat>(z_end.data() + n, n, n);
    return {std::move(traj), std::move(M)};
}

namespace {

// Bisection on the dense interpolant; the bracket is assumed to hold a sign change.
double locate_root(const DenseStep& dense, int comp, double value, double ta, double tb) {
    double ga = dense.eval(ta)[comp] - value;
    for (int i = 0; i < 200; ++i) {
        const double tm = 0.5 * (ta + tb);
        const double gm = dense.eval(tm)[comp] - value;
        if (gm == 0.0) return tm;
        if ((ga < 0.0) == (gm < 0.0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
        }
        if (tb - ta < 1e-15 * std::max(1.0, std::abs(tb))) break;
    }
    return 0.5 * (ta + tb);
}

bool direction_ok(int direction, double g_prev, double g_next) {
    if (direction > 0) return g_prev < 0.0 && g_next >= 0.0;
    if (direction < 0) return g_prev > 0.0 && g_next <= 0.0;
    return (g_prev < 0.0 && g_next >= 0.0) || (g_prev > 0.0 && g_next <= 0.0);
}

template <typename OnEvent>
void scan_crossings(const DynamicalSystem& system, const Vec& x0, double t0, double t_max,
                    const IntegratorConfig& cfg, const Section& section, OnEvent&& on_event) {
    if (section.component < 0 || section.component >= system.dim)
        throw std::invalid_argument("find_crossing: section component out of range");
    Dopri5 stepper(system.rhs, x0, t0, cfg);
    double g_prev = x0[section.component] - section.value;
    double t_prev = t0;
    while (stepper.step(t_max)) {
        // Subdivide the accepted step so multiple crossings inside it are kept.
        constexpr int kSub = 8;
        const DenseStep& dense = stepper.dense();
        for (int i = 1; i <= kSub; ++i) {
            const double tc = dense.t0 + dense.h * static_cast<double>(i) / kSub;
            const double gc = dense.eval(tc)[section.component] - section.value;
            if (direction_ok(section.direction, g_prev, gc)) {
                const double t_star = locate_root(dense, section.component, section.value, t_prev, tc);
                if (!on_event(Event{t_star, dense.eval(t_star)})) return;
            }
            g_prev = gc;
            t_prev = tc;
        }
    }
}

}  // namespace

std::optional<Event> find_crossing(const DynamicalSystem& system, const Vec& x0, double t0,
                                   double t_max, const IntegratorConfig& cfg, const Section& section) {
    std::optional<Event> hit;
    scan_crossings(system, x0, t0, t_max, cfg, section, [&hit](Event ev) {
        hit = std::move(ev);
        return false;
    });
    return hit;
}

std::vector<Event> find_crossings(const DynamicalSystem& system, const Vec& x0, double t0,
                                  double t_max, const IntegratorConfig& cfg, const Section& section) {
    std::vector<Event> events;
    scan_crossings(system, x0, t0, t_max, cfg, section, [&events](Event ev) {
        events.push_back(std::move(ev));
        return true;
    });
    return events;
}

}  // namespace linimm
