#pragma once

#include "fcs/horizon.hpp"

namespace fcs {

/// Outcome of one sphere decode.
struct DecodeResult {
    VectorXd u_opt;                  // full-horizon input vector
    double cost = 0.0;               // squared radius at termination
    std::uint64_t nodes_visited = 0; // candidate evaluations
    double elapsed_seconds = 0.0;
};

struct InitialSolution {
    VectorXd u;
    double rho2 = 0.0;
};

/// Warm start: the better of the shifted previous optimum (last step repeated,
/// p entries recomputed) and the Babai estimate (unconstrained switch entries
/// rounded to {-1,0,1}, p entries imposed). Always feasible.
InitialSolution initial_solution_ft(const HorizonProblem& hp, const UnconstrainedPoint& pt,
                                    const PhaseSwitch& u_prev,
                                    const VectorXd* previous_opt = nullptr);

/// Depth-first branch-and-bound over the 6*N_p-level tree: switch levels
/// iterate {-1,0,1} in ascending order, transition levels are singletons
/// |u_j(l) - u_j_prev|. Strict pruning d^2 < rho^2; an equal-cost candidate
/// never replaces the incumbent. Returns the global optimum of the ILS
/// problem over all feasible sequences.
DecodeResult decode_ft(const HorizonProblem& hp, const VectorXd& u_hat,
                       const VectorXd& u_ini, double rho2_ini, const PhaseSwitch& u_prev);

}  // namespace fcs
