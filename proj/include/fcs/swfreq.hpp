#pragma once

#include "fcs/types.hpp"

namespace fcs {

/// State-space form of the second-order switching-frequency estimator:
/// x(k+1) = A x(k) + B p(k), f_sw(k) = C x(k). The input matrix scales by
/// 1/(12 T_s) so that the DC gain of f_sw equals transitions per device
/// per second for a 12-device converter.
struct FilterMatrices {
    Eigen::Matrix2d A;
    Eigen::Matrix<double, 2, 3> B;
    Eigen::RowVector2d C;
};

FilterMatrices filter_matrices(const FilterParams& fp);

TransitionVector transitions(const PhaseSwitch& u, const PhaseSwitch& u_prev);

FilterState step_filter(const FilterMatrices& fm, const FilterState& x, const TransitionVector& p);
FilterState step_filter(const FilterParams& fp, const FilterState& x, const TransitionVector& p);

/// Constraint violation of the switching-frequency upper bound.
double slack(double f_sw, double f_star);

}  // namespace fcs
