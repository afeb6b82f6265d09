#include "fcs/plant.hpp"

namespace fcs {

const Eigen::Matrix<double, 2, 3>& clarke_matrix() {
    static const Eigen::Matrix<double, 2, 3> K = [] {
        Eigen::Matrix<double, 2, 3> m;
        const double s = std::sqrt(3.0) / 2.0;
        m << 1.0, -0.5, -0.5,
             0.0,    s,   -s;
        return Eigen::Matrix<double, 2, 3>((2.0 / 3.0) * m);
    }();
    return K;
}

AlphaBetaVector clarke(const Eigen::Vector3d& abc) {
    return AlphaBetaVector::from(clarke_matrix() * abc);
}

Eigen::Vector3d inv_clarke(const AlphaBetaVector& ab) {
    return 1.5 * clarke_matrix().transpose() * ab.as_vector();
}

PlantMatrices discretize_dt(const SystemParams& p, double dt) {
    p.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be > 0");

    const double w = p.omega_base();
    const double a = p.R * w / p.L;   // continuous decay rate [1/s]
    const double x = a * dt;

    // ZOH input gain: integral of e^{-a tau} (w/L) dtau over one interval.
    // Series branch avoids 0/0 as R -> 0.
    double gain;
    if (x < 1e-8) {
        gain = (w * dt / p.L) * (1.0 - 0.5 * x);
    } else {
        gain = (1.0 - std::exp(-x)) / p.R;
    }

    PlantMatrices m;
    m.A = std::exp(-x) * Eigen::Matrix2d::Identity();
    m.B = gain * (p.V_dc / 2.0) * clarke_matrix();
    m.D = -gain * clarke_matrix();
    m.C = Eigen::Matrix2d::Identity();
    return m;
}

PlantMatrices discretize(const SystemParams& p) {
    return discretize_dt(p, p.T_s);
}

AlphaBetaVector step_plant(const PlantMatrices& m, const AlphaBetaVector& x,
                           const PhaseSwitch& u, const Eigen::Vector3d& v_g_abc) {
    return AlphaBetaVector::from(m.A * x.as_vector() + m.B * u.as_vector() + m.D * v_g_abc);
}

Eigen::Vector3d grid_voltage(const SystemParams& p, double t) {
    const double w = p.omega_base();
    const double third = 2.0 * std::numbers::pi / 3.0;
    return {p.V_g * std::cos(w * t),
            p.V_g * std::cos(w * t - third),
            p.V_g * std::cos(w * t - 2.0 * third)};
}

AlphaBetaVector current_reference(double P, double Q, const AlphaBetaVector& v_g_ab) {
    const double n2 = v_g_ab.alpha * v_g_ab.alpha + v_g_ab.beta * v_g_ab.beta;
    if (!(n2 > 0.0)) throw std::invalid_argument("current_reference: zero grid voltage");
    return {(P * v_g_ab.alpha + Q * v_g_ab.beta) / n2,
            (P * v_g_ab.beta - Q * v_g_ab.alpha) / n2};
}

}  // namespace fcs
