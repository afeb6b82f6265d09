#pragma once

#include "fcs/horizon.hpp"
#include "fcs/sphere_ft.hpp"

namespace fcs {

/// Everything the slack rollout needs at one control step: the estimator
/// matrices, its state at step k, the frequency bound, and the propagators
/// C_sw A_sw^n used by the future-cost bound. The struct is unit-agnostic;
/// make_slack_context builds the controller's context with the frequency
/// channel converted to krad/s (see kFreqScale), while tests may assemble
/// raw Hz contexts directly.
struct SlackContext {
    FilterMatrices fm;
    FilterState x_sw_init;
    double f_star = 0.0;
    std::vector<Eigen::RowVector2d> c_a_pow;  // n = 1..N_p
};

/// Controller-side context: estimator state and bound are taken in Hz and
/// scaled into the objective's angular-kHz slack channel.
SlackContext make_slack_context(const HorizonProblem& hp, const FilterState& x_sw,
                                double f_star);

/// Unit-preserving context over an explicit horizon (test/verification use).
SlackContext raw_slack_context(const FilterMatrices& fm, const FilterState& x_sw,
                               double f_star, int N_p);

/// One estimator step plus the slack it induces:
/// x' = A x + B |u - u_prev|, s' = max(C x' - f_star, 0).
std::pair<FilterState, double> slack_eval(const SlackContext& ctx, const FilterState& x,
                                          const PhaseSwitch& u, const PhaseSwitch& u_prev);

/// Admissible lower bound on the slack cost still to be incurred over
/// `remaining` steps, assuming no further switching:
/// lambda_sw * sum_n max(C A^n x - f_star, 0)^2. Zero when remaining == 0.
double prop1_bound(const SlackContext& ctx, const FilterState& x, int remaining,
                   double lambda_sw);

/// Warm start: best of the shifted previous optimum and the Babai estimate,
/// slack entries recomputed by rollout from the context's state. Always
/// feasible.
InitialSolution initial_solution_fl(const HorizonProblem& hp, const UnconstrainedPoint& pt,
                                    const SlackContext& ctx, const PhaseSwitch& u_prev,
                                    const VectorXd* previous_opt = nullptr);

/// Depth-first branch-and-bound over the 4*N_p-level tree: three switch
/// levels per step, then one singleton slack level where the estimator state,
/// the slack, and (optionally) the future-cost bound are evaluated. Pruning
/// tests d^2 + dbar^2 < rho^2. With use_bound off the bound is identically
/// zero; both settings return the same optimum.
DecodeResult decode_fl(const HorizonProblem& hp, const VectorXd& u_hat,
                       const VectorXd& u_ini, double rho2_ini, const SlackContext& ctx,
                       const PhaseSwitch& u_prev, bool use_bound = true);

}  // namespace fcs
