#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace fcs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Electrical and timing parameters of the grid-connected converter.
/// Resistances and reactances are per-unit; f1 and T_s are in SI units.
struct SystemParams {
    double R = 0.015;    // series resistance [pu]
    double L = 0.266;    // series reactance [pu]
    double V_g = 1.0;    // grid voltage magnitude [pu, peak]
    double V_dc = 1.9;   // dc-link voltage [pu]
    double f1 = 50.0;    // fundamental frequency [Hz]
    double T_s = 1e-4;   // control sampling interval [s]

    double omega_base() const { return 2.0 * std::numbers::pi * f1; }

    void validate() const {
        if (!(R >= 0.0)) throw std::invalid_argument("SystemParams: R must be >= 0");
        if (!(L > 0.0)) throw std::invalid_argument("SystemParams: L must be > 0");
        if (!(V_dc > 0.0)) throw std::invalid_argument("SystemParams: V_dc must be > 0");
        if (!(T_s > 0.0)) throw std::invalid_argument("SystemParams: T_s must be > 0");
        if (!(f1 > 0.0)) throw std::invalid_argument("SystemParams: f1 must be > 0");
    }
};

/// Three-phase switch position, each leg at -1, 0 or +1.
struct PhaseSwitch {
    int a = 0;
    int b = 0;
    int c = 0;

    bool valid() const {
        auto ok = [](int v) { return v == -1 || v == 0 || v == 1; };
        return ok(a) && ok(b) && ok(c);
    }
    bool operator==(const PhaseSwitch&) const = default;

    Eigen::Vector3d as_vector() const { return {double(a), double(b), double(c)}; }
};

/// Per-phase switching transition counts p = |u - u_prev|, entries in {0,1,2}.
struct TransitionVector {
    int a = 0;
    int b = 0;
    int c = 0;

    bool operator==(const TransitionVector&) const = default;
    int sum() const { return a + b + c; }
    Eigen::Vector3d as_vector() const { return {double(a), double(b), double(c)}; }
};

/// Stationary-frame vector (Clarke coordinates), per-unit.
struct AlphaBetaVector {
    double alpha = 0.0;
    double beta = 0.0;

    Eigen::Vector2d as_vector() const { return {alpha, beta}; }
    static AlphaBetaVector from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
    double norm() const { return std::hypot(alpha, beta); }
};

/// State of the second-order switching-frequency estimator [Hz].
struct FilterState {
    double x1 = 0.0;
    double x2 = 0.0;

    double output() const { return x2; }  // C_sw = [0 1]
    Eigen::Vector2d as_vector() const { return {x1, x2}; }
    static FilterState from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

/// Tuning of the switching-frequency estimator.
struct FilterParams {
    double a1 = 0.99;
    double a2 = 0.99;
    double T_s = 1e-4;

    void validate() const {
        if (!(a1 >= 0.0 && a1 < 1.0)) throw std::invalid_argument("FilterParams: a1 must be in [0,1)");
        if (!(a2 >= 0.0 && a2 < 1.0)) throw std::invalid_argument("FilterParams: a2 must be in [0,1)");
        if (!(T_s > 0.0)) throw std::invalid_argument("FilterParams: T_s must be > 0");
    }
};

/// Cost weights shared by both controllers.
struct CostWeights {
    double lambda_u = 13e-3;
    double lambda_sw = 60.0;

    void validate() const {
        if (!(lambda_u > 0.0)) throw std::invalid_argument("CostWeights: lambda_u must be > 0");
        if (!(lambda_sw >= 0.0)) throw std::invalid_argument("CostWeights: lambda_sw must be >= 0");
    }
};

enum class ControllerKind { FT, FL };

}  // namespace fcs
