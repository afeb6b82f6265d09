#pragma once

#include "fcs/types.hpp"

namespace fcs {

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lower-triangular generator V with positive diagonal and V^T V = H.
///
/// Note this is not the usual Cholesky orientation (that gives H = L L^T).
/// It is obtained by factoring the index-reversed matrix and un-reversing,
/// so that partial residuals of ||u_hat - V U|| depend only on the leading
/// entries of U. Throws NotPositiveDefinite if H is not.
MatrixXd lower_generator(const MatrixXd& H);

/// Solve V z = b for lower-triangular V (forward substitution).
VectorXd solve_lower(const MatrixXd& V, const VectorXd& b);

/// Solve V^T z = b for lower-triangular V (backward substitution).
VectorXd solve_lower_transposed(const MatrixXd& V, const VectorXd& b);

}  // namespace fcs
