#include "fcs/linalg.hpp"

namespace fcs {

namespace {

// In-place lower Cholesky A = L L^T on the lower triangle of A.
void cholesky_lower(MatrixXd& A) {
    const Eigen::Index n = A.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = A(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (!(d > 0.0)) throw NotPositiveDefinite("cholesky: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        A(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / ljj;
        }
    }
    A.triangularView<Eigen::StrictlyUpper>().setZero();
}

}  // namespace

MatrixXd lower_generator(const MatrixXd& H) {
    if (H.rows() != H.cols()) throw std::invalid_argument("lower_generator: H must be square");
    const Eigen::Index n = H.rows();

    // Flip both index orders, factor, flip back through a transpose.
    MatrixXd Hr(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) Hr(i, j) = H(n - 1 - i, n - 1 - j);

    cholesky_lower(Hr);

    MatrixXd V = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) V(i, j) = Hr(n - 1 - j, n - 1 - i);
    return V;
}

VectorXd solve_lower(const MatrixXd& V, const VectorXd& b) {
    return V.triangularView<Eigen::Lower>().solve(b);
}

VectorXd solve_lower_transposed(const MatrixXd& V, const VectorXd& b) {
    return V.transpose().triangularView<Eigen::Upper>().solve(b);
}

}  // namespace fcs
