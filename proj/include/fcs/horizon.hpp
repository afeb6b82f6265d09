#pragma once

#include "fcs/linalg.hpp"
#include "fcs/plant.hpp"
#include "fcs/swfreq.hpp"
#include "fcs/types.hpp"

#include <vector>

namespace fcs {

/// Augmented model of the frequency-tracking controller: state stacks the
/// electrical state and the estimator state, the input stacks the switch
/// position and the transition counts.
struct AugmentedModelT {
    Eigen::Matrix4d A;
    Eigen::Matrix<double, 4, 6> B;
    Eigen::Matrix<double, 3, 4> C;
    Eigen::Matrix<double, 4, 3> D;
};

/// Augmented model of the frequency-limiting controller: physical state only,
/// the input stacks the switch position and the (dynamics-free) slack.
struct AugmentedModelS {
    Eigen::Matrix2d A;
    Eigen::Matrix<double, 2, 4> B;
    Eigen::Matrix2d C;
    Eigen::Matrix<double, 2, 3> D;
};

AugmentedModelT augment_ft(const PlantMatrices& pm, const FilterMatrices& fm);
AugmentedModelS augment_fl(const PlantMatrices& pm);

/// Frequency signals enter the controllers' objectives scaled to units of
/// 100 Hz, keeping them commensurate with per-unit currents; the weights
/// then produce the reported steady-state, transient, and solver-effort
/// behavior together. The estimator itself, the slack and bound primitives,
/// and every reported metric stay in Hz; this factor appears only in the FT
/// output weight and in the FL slack channel.
inline constexpr double kFreqScale = 1e-2;

/// Full-horizon prediction: Y(k+1) = Gamma x(k) + Upsilon U(k) + Psi Vg(k).
struct Prediction {
    MatrixXd Gamma;
    MatrixXd Upsilon;
    MatrixXd Psi;
};

Prediction build_prediction(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                            const MatrixXd& D, int N_p);

/// P(k) = Pi U(k) - E u(k-1) stacks [delta_u; p] per step.
void build_pi_e_ft(int N_p, MatrixXd& Pi, MatrixXd& E);

/// Delta U(k) = Pi U(k) - E u(k-1) with zero rows at slack positions;
/// L extracts the slack entries: S(k+1) = L U(k).
void build_pi_e_l_fl(int N_p, MatrixXd& Pi, MatrixXd& E, MatrixXd& L);

/// One integer-least-squares problem template: all full-horizon matrices,
/// the Hessian and its lower-triangular generator. Built once per parameter
/// set; immutable afterwards.
struct HorizonProblem {
    ControllerKind kind;
    int N_p = 0;

    MatrixXd Gamma, Upsilon, Psi;
    MatrixXd Pi, E;
    MatrixXd L_slack;   // FL only (empty for FT)
    MatrixXd Q_bar;
    MatrixXd H;
    MatrixXd V;         // lower triangular, V^T V = H
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        V_rows;         // row-major copy for the decoders' per-level products
    MatrixXd Psi_sum;   // Psi folded for a horizon-constant v_g (dim x 3)

    double lambda_u = 0.0;
    double lambda_sw = 0.0;
    double f_star = 0.0;  // FL only: reference bound used at assembly time

    FilterParams filter;
    FilterMatrices filter_mats;
    std::vector<Eigen::RowVector2d> c_a_pow;  // C_sw A_sw^n, n = 1..N_p

    int dim() const { return kind == ControllerKind::FT ? 6 * N_p : 4 * N_p; }
    int state_dim() const { return kind == ControllerKind::FT ? 4 : 2; }
    int output_dim() const { return kind == ControllerKind::FT ? 3 : 2; }
};

HorizonProblem assemble_ft(const SystemParams& sys, const FilterParams& fp,
                           const CostWeights& w, int N_p);
HorizonProblem assemble_fl(const SystemParams& sys, const FilterParams& fp,
                           const CostWeights& w, int N_p, double f_star);

/// Linear cost term and unconstrained optimum of one control step.
/// u_unc minimizes the unconstrained quadratic form; u_hat = V u_unc is the
/// lattice-space target of the ILS objective ||u_hat - V U||^2.
struct UnconstrainedPoint {
    VectorXd theta;
    VectorXd u_unc;
    VectorXd u_hat;
};

UnconstrainedPoint linear_term(const HorizonProblem& hp, const VectorXd& x,
                               const Eigen::Vector3d& v_g_abc, const VectorXd& y_ref,
                               const PhaseSwitch& u_prev);

/// Stacked output reference over the horizon. The current-reference phasor is
/// rotated forward by step_rotation per prediction step; f_star is held
/// constant (only the FT reference carries a frequency row).
VectorXd reference_stack(const HorizonProblem& hp, const AlphaBetaVector& i_ref,
                         double step_rotation, double f_star);

/// ILS objective ||u_hat - V U||^2.
double ils_cost(const HorizonProblem& hp, const VectorXd& u_hat, const VectorXd& U);

}  // namespace fcs
