#include "linimm/dynsys.hpp"

#include <cmath>
#include <stdexcept>

namespace linimm {

namespace {

double require_param(const std::map<std::string, double>& params, const std::string& sys,
                     const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("make_system(" + sys + "): missing parameter '" + key + "'");
    return it->second;
}

double param_or(const std::map<std::string, double>& params, const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

}  // namespace

int LinearSystemSpec::dim() const {
    switch (kind) {
        case Kind::Matrix:
            if (!matrix) throw std::invalid_argument("LinearSystemSpec: kind=Matrix requires a matrix");
            return static_cast<int>(matrix->rows());
        case Kind::Harmonic: return 2;
        case Kind::ExtendedHarmonic: return 3;
        case Kind::LinearLimitCycle: return 2;
        case Kind::DampedExtended: return 4;
    }
    return 0;
}

Vec LinearSystemSpec::rhs(const Vec& y) const {
    Vec dy(dim());
    switch (kind) {
        case Kind::Matrix:
            dy = (*matrix) * y;
            break;
        case Kind::Harmonic: {
            const double w = params.at("omega");
            dy << w * y[1], -w * y[0];
            break;
        }
        case Kind::ExtendedHarmonic: {
            const double w = params.at("omega");
            dy << w * y[1], -w * y[0], 0.0;
            break;
        }
        case Kind::LinearLimitCycle: {
            const double D = params.at("D");
            const double Om = params.at("Omega");
            dy << -D * (y[0] - 1.0), Om;
            break;
        }
        case Kind::DampedExtended: {
            const double c = params.at("c_l");
            const double w = params.at("omega_l");
            const double Om = params.at("Omega");
            dy << y[1], -c * y[1] - w * w * y[0], Om, 0.0;
            break;
        }
    }
    return dy;
}

Mat LinearSystemSpec::as_matrix() const {
    switch (kind) {
        case Kind::Matrix:
            if (!matrix || matrix->rows() != matrix->cols())
                throw std::invalid_argument("LinearSystemSpec: kind=Matrix requires a square matrix");
            return *matrix;
        case Kind::Harmonic: {
            const double w = params.at("omega");
            Mat A(2, 2);
            A << 0.0, w, -w, 0.0;
            return A;
        }
        case Kind::ExtendedHarmonic: {
            const double w = params.at("omega");
            Mat A = Mat::Zero(3, 3);
            A(0, 1) = w;
            A(1, 0) = -w;
            return A;
        }
        case Kind::LinearLimitCycle:
            throw std::invalid_argument("LinearSystemSpec: LinearLimitCycle prototype has no pure matrix form");
        case Kind::DampedExtended:
            throw std::invalid_argument("LinearSystemSpec: DampedExtended prototype has no pure matrix form");
    }
    throw std::invalid_argument("LinearSystemSpec: unknown kind");
}

LinearSystemSpec LinearSystemSpec::harmonic(double omega) {
    LinearSystemSpec s;
    s.kind = Kind::Harmonic;
    s.params["omega"] = omega;
    return s;
}

LinearSystemSpec LinearSystemSpec::extended_harmonic(double omega) {
    LinearSystemSpec s;
    s.kind = Kind::ExtendedHarmonic;
    s.params["omega"] = omega;
    return s;
}

LinearSystemSpec LinearSystemSpec::linear_limit_cycle(double D, double Omega) {
    LinearSystemSpec s;
    s.kind = Kind::LinearLimitCycle;
    s.params["D"] = D;
    s.params["Omega"] = Omega;
    return s;
}

LinearSystemSpec LinearSystemSpec::damped_extended(double c_l, double omega_l, double Omega) {
    LinearSystemSpec s;
    s.kind = Kind::DampedExtended;
    s.params["c_l"] = c_l;
    s.params["omega_l"] = omega_l;
    s.params["Omega"] = Omega;
    return s;
}

LinearSystemSpec LinearSystemSpec::from_matrix(const Mat& A) {
    LinearSystemSpec s;
    s.kind = Kind::Matrix;
    s.matrix = A;
    return s;
}

DynamicalSystem make_system(const std::string& name, const std::map<std::string, double>& params) {
    DynamicalSystem sys;
    sys.name = name;
    sys.params = params;

    if (name == "pendulum") {
        sys.dim = 2;
        sys.rhs = [](const Vec& x, double) {
            Vec dx(2);
            dx << x[1], -std::sin(x[0]);
            return dx;
        };
        sys.jacobian = [](const Vec& x, double) {
            Mat J(2, 2);
            J << 0.0, 1.0, -std::cos(x[0]), 0.0;
            return J;
        };
        sys.energy_fn = [](const Vec& x) { return 0.5 * x[1] * x[1] - std::cos(x[0]); };
    } else if (name == "linear_osc") {
        sys.dim = 2;
        sys.rhs = [](const Vec& x, double) {
            Vec dx(2);
            dx << x[1], -x[0];
            return dx;
        };
        sys.jacobian = [](const Vec&, double) {
            Mat J(2, 2);
            J << 0.0, 1.0, -1.0, 0.0;
            return J;
        };
        sys.energy_fn = [](const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    } else if (name == "duffing_cons") {
        sys.dim = 2;
        sys.rhs = [](const Vec& x, double) {
            Vec dx(2);
            dx << x[1], x[0] - x[0] * x[0] * x[0];
            return dx;
        };
        sys.jacobian = [](const Vec& x, double) {
            Mat J(2, 2);
            J << 0.0, 1.0, 1.0 - 3.0 * x[0] * x[0], 0.0;
            return J;
        };
        sys.energy_fn = [](const Vec& x) {
            return 0.5 * x[1] * x[1] - 0.5 * x[0] * x[0] + 0.25 * x[0] * x[0] * x[0] * x[0];
        };
    } else if (name == "ext_linear_osc") {
        sys.dim = 3;
        sys.rhs = [](const Vec& x, double) {
            Vec dx(3);
            dx << x[1], -x[0], 0.0;
            return dx;
        };
        sys.jacobian = [](const Vec&, double) {
            Mat J = Mat::Zero(3, 3);
            J(0, 1) = 1.0;
            J(1, 0) = -1.0;
            return J;
        };
    } else if (name == "vdp") {
        sys.dim = 2;
        sys.rhs = [](const Vec& x, double) {
            Vec dx(2);
            dx << x[1], -(x[0] * x[0] - 1.0) * x[1] - x[0];
            return dx;
        };
        sys.jacobian = [](const Vec& x, double) {
            Mat J(2, 2);
            J << 0.0, 1.0, -2.0 * x[0] * x[1] - 1.0, 1.0 - x[0] * x[0];
            return J;
        };
    } else if (name == "linear_limit_cycle") {
        const double D = require_param(params, name, "D");
        const double Om = require_param(params, name, "Omega");
        sys.dim = 2;
        sys.rhs = [D, Om](const Vec& y, double) {
            Vec dy(2);
            dy << -D * (y[0] - 1.0), Om;
            return dy;
        };
        sys.jacobian = [D](const Vec&, double) {
            Mat J = Mat::Zero(2, 2);
            J(0, 0) = -D;
            return J;
        };
    } else if (name == "duffing_fd") {
        const double c = param_or(params, "c", 0.02);
        const double k = param_or(params, "k", 1.0);
        const double k3 = param_or(params, "k3", 1.0);
        const double f = param_or(params, "f", 0.1);
        const double Om = param_or(params, "Omega", 1.3);
        sys.params = {{"c", c}, {"k", k}, {"k3", k3}, {"f", f}, {"Omega", Om}};
        sys.dim = 3;
        sys.rhs = [c, k, k3, f, Om](const Vec& x, double) {
            Vec dx(3);
            dx << x[1], -c * x[1] - k * x[0] - k3 * x[0] * x[0] * x[0] + f * std::cos(x[2]), Om;
            return dx;
        };
        sys.jacobian = [c, k, k3, f](const Vec& x, double) {
            Mat J = Mat::Zero(3, 3);
            J(0, 1) = 1.0;
            J(1, 0) = -k - 3.0 * k3 * x[0] * x[0];
            J(1, 1) = -c;
            J(1, 2) = -f * std::sin(x[2]);
            return J;
        };
    } else if (name == "damped_ext_linear") {
        const double c = require_param(params, name, "c_l");
        const double w = require_param(params, name, "omega_l");
        const double Om = require_param(params, name, "Omega");
        sys.dim = 4;
        sys.rhs = [c, w, Om](const Vec& y, double) {
            Vec dy(4);
            dy << y[1], -c * y[1] - w * w * y[0], Om, 0.0;
            return dy;
        };
        sys.jacobian = [c, w](const Vec&, double) {
            Mat J = Mat::Zero(4, 4);
            J(0, 1) = 1.0;
            J(1, 0) = -w * w;
            J(1, 1) = -c;
            return J;
        };
    } else if (name == "harmonic_w") {
        const double w = require_param(params, name, "omega");
        sys.dim = 2;
        sys.rhs = [w](const Vec& y, double) {
            Vec dy(2);
            dy << w * y[1], -w * y[0];
            return dy;
        };
        sys.jacobian = [w](const Vec&, double) {
            Mat J(2, 2);
            J << 0.0, w, -w, 0.0;
            return J;
        };
        sys.energy_fn = [](const Vec& y) { return 0.5 * (y[0] * y[0] + y[1] * y[1]); };
    } else if (name == "app_lc") {
        sys.dim = 2;
        sys.rhs = [](const Vec& x, double) {
            const double r = std::hypot(x[0], x[1]);
            Vec dx(2);
            dx << x[0] / r + (x[1] - x[0]), x[1] / r - (x[0] + x[1]);
            return dx;
        };
        sys.jacobian = [](const Vec& x, double) {
            const double r = std::hypot(x[0], x[1]);
            const double r3 = r * r * r;
            Mat J(2, 2);
            J << x[1] * x[1] / r3 - 1.0, -x[0] * x[1] / r3 + 1.0,
                 -x[0] * x[1] / r3 - 1.0, x[0] * x[0] / r3 - 1.0;
            return J;
        };
    } else if (name == "app_coexist") {
        const double l1 = require_param(params, name, "lambda1");
        const double l2 = require_param(params, name, "lambda2");
        // Polar form of y' = diag(lambda1, lambda2) y with y = x1*(sin x2, cos x2).
        // The derivation requires the cos^2 term to depend on x2.
        sys.dim = 2;
        sys.rhs = [l1, l2](const Vec& x, double) {
            const double s = std::sin(x[1]);
            const double c = std::cos(x[1]);
            Vec dx(2);
            dx << x[0] * (l1 * s * s + l2 * c * c), (l1 - l2) * s * c;
            return dx;
        };
        sys.jacobian = [l1, l2](const Vec& x, double) {
            const double s = std::sin(x[1]);
            const double c = std::cos(x[1]);
            Mat J(2, 2);
            J << l1 * s * s + l2 * c * c, x[0] * (l1 - l2) * 2.0 * s * c,
                 0.0, (l1 - l2) * (c * c - s * s);
            return J;
        };
    } else {
        throw std::invalid_argument("make_system: unknown system '" + name + "'");
    }
    return sys;
}

double energy(const DynamicalSystem& system, const Vec& state) {
    if (!system.has_energy())
        throw std::invalid_argument("energy: system '" + system.name + "' has no first integral");
    return system.energy_fn(state);
}

}  // namespace linimm
