#pragma once

#include "fcs/plant.hpp"
#include "fcs/swfreq.hpp"
#include "fcs/types.hpp"

#include <span>
#include <vector>

namespace fcs {

/// Exhaustive-enumeration result. Costs here are stage-cost sums computed by
/// direct rollout, deliberately independent of the full-horizon matrices and
/// the lattice generator.
struct OracleResult {
    std::vector<PhaseSwitch> sequence;
    double cost = 0.0;
    std::uint64_t evaluated = 0;
};

/// One frequency-tracking decision instance.
struct FtInstance {
    AlphaBetaVector x_ph;
    FilterState x_sw;
    Eigen::Vector3d v_g_abc = Eigen::Vector3d::Zero();
    VectorXd y_ref;      // stacked [i_alpha*, i_beta*, f_sw*] per step (3 N_p)
    PhaseSwitch u_prev;
};

/// One frequency-limiting decision instance.
struct FlInstance {
    AlphaBetaVector x_ph;
    FilterState x_sw;
    Eigen::Vector3d v_g_abc = Eigen::Vector3d::Zero();
    VectorXd y_ref;      // stacked [i_alpha*, i_beta*] per step (2 N_p)
    PhaseSwitch u_prev;
    double f_star = 0.0;
};

double rollout_cost_ft(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                       const FtInstance& inst, std::span<const PhaseSwitch> seq);

double rollout_cost_fl(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                       const FlInstance& inst, std::span<const PhaseSwitch> seq);

/// Minimize the stage-cost sum over all 3^(3 N_p) switch sequences.
/// Ties break toward the lexicographically first sequence (-1 < 0 < 1).
/// Guarded to N_p <= 4.
OracleResult enumerate_ft(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                          int N_p, const FtInstance& inst);

OracleResult enumerate_fl(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                          int N_p, const FlInstance& inst);

/// Full-horizon input vector with the dependent entries imposed:
/// p = |delta u| per step (FT) or the slack rollout (FL).
VectorXd feasible_vector_ft(std::span<const PhaseSwitch> seq, const PhaseSwitch& u_prev);
VectorXd feasible_vector_fl(std::span<const PhaseSwitch> seq, const PhaseSwitch& u_prev,
                            const FilterMatrices& fm, const FilterState& x_sw, double f_star);

}  // namespace fcs
