#pragma once

#include "fcs/types.hpp"

namespace fcs {

/// Discrete-time model of the per-unit RL current dynamics, one sampling
/// interval per step: x(k+1) = A x(k) + B u_ph(k) + D v_g_abc(k), y = C x.
/// B and D act on three-phase quantities (abc), states live in alpha-beta.
struct PlantMatrices {
    Eigen::Matrix2d A;
    Eigen::Matrix<double, 2, 3> B;
    Eigen::Matrix<double, 2, 3> D;
    Eigen::Matrix2d C;
};

/// Clarke transformation matrix K (amplitude-invariant, 2x3).
const Eigen::Matrix<double, 2, 3>& clarke_matrix();

AlphaBetaVector clarke(const Eigen::Vector3d& abc);

/// Pseudo-inverse K^-1 = (3/2) K^T; output has zero common-mode component.
Eigen::Vector3d inv_clarke(const AlphaBetaVector& ab);

/// Zero-order-hold discretization of di/dt = -(R w/L) i + (w/L)(v_c - v_g)
/// with w = 2*pi*f1, v_c = (V_dc/2) K u_ph. A series branch covers R -> 0.
PlantMatrices discretize(const SystemParams& p);

/// Same as discretize, but over an arbitrary hold interval dt (plant
/// integration uses this at sub-step resolution).
PlantMatrices discretize_dt(const SystemParams& p, double dt);

AlphaBetaVector step_plant(const PlantMatrices& m, const AlphaBetaVector& x,
                           const PhaseSwitch& u, const Eigen::Vector3d& v_g_abc);

/// Balanced three-phase set; phase a peaks at t = 0.
Eigen::Vector3d grid_voltage(const SystemParams& p, double t);

/// Current reference from active/reactive power setpoints:
/// i* = (P v + Q [v_beta, -v_alpha]) / |v|^2. Rejects |v| = 0.
AlphaBetaVector current_reference(double P, double Q, const AlphaBetaVector& v_g_ab);

}  // namespace fcs
