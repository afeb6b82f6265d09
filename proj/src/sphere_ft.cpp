#include "fcs/sphere_ft.hpp"

#include <chrono>

namespace fcs {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int round_to_level(double v) {
    const int r = int(std::lround(v));
    return std::clamp(r, -1, 1);
}

// Recompute the dependent p entries in place from the switch entries.
void impose_transition_structure(VectorXd& U, const PhaseSwitch& u_prev) {
    const int N_p = int(U.size()) / 6;
    Eigen::Vector3d up = u_prev.as_vector();
    for (int s = 0; s < N_p; ++s) {
        for (int j = 0; j < 3; ++j) {
            U(6 * s + 3 + j) = std::abs(U(6 * s + j) - up(j));
            up(j) = U(6 * s + j);
        }
    }
}

struct FtSearch {
    const RowMajorMatrix& V;
    const VectorXd& u_hat;
    int levels;
    VectorXd U;
    VectorXd best;
    double rho2;
    std::uint64_t nodes = 0;

    // l is 0-based; u_prev holds the switch position applied one step before
    // the step that owns level l.
    void search(int l, double d2, const Eigen::Vector3d& u_prev) {
        const int step = l / 6;
        const int j = l - 6 * step;
        const bool switch_level = j < 3;
        const int n_candidates = switch_level ? 3 : 1;
        const double singleton =
            switch_level ? 0.0 : std::abs(U(6 * step + j - 3) - u_prev(j - 3));

        for (int ci = 0; ci < n_candidates; ++ci) {
            const double u = switch_level ? double(ci - 1) : singleton;
            U(l) = u;
            const double* vrow = V.data() + std::size_t(l) * V.cols();
            double acc = 0.0;
            for (int t = 0; t <= l; ++t) acc += vrow[t] * U(t);
            const double resid = u_hat(l) - acc;
            const double d2n = d2 + resid * resid;
            ++nodes;
            if (d2n < rho2) {
                if (l + 1 < levels) {
                    if (j == 5) {
                        search(l + 1, d2n, U.segment<3>(6 * step));
                    } else {
                        search(l + 1, d2n, u_prev);
                    }
                } else {
                    best = U;
                    rho2 = d2n;
                }
            }
        }
    }
};

}  // namespace

InitialSolution initial_solution_ft(const HorizonProblem& hp, const UnconstrainedPoint& pt,
                                    const PhaseSwitch& u_prev, const VectorXd* previous_opt) {
    const int n = hp.dim();

    VectorXd babai = VectorXd::Zero(n);
    for (int s = 0; s < hp.N_p; ++s)
        for (int j = 0; j < 3; ++j) babai(6 * s + j) = round_to_level(pt.u_unc(6 * s + j));
    impose_transition_structure(babai, u_prev);

    InitialSolution out{babai, ils_cost(hp, pt.u_hat, babai)};

    if (previous_opt != nullptr && previous_opt->size() == n) {
        // Shift one step forward, repeat the last step, fix the p entries.
        VectorXd guess(n);
        guess.head(n - 6) = previous_opt->tail(n - 6);
        guess.tail(6) = previous_opt->tail(6);
        impose_transition_structure(guess, u_prev);
        const double c = ils_cost(hp, pt.u_hat, guess);
        if (c < out.rho2) out = {guess, c};
    }
    return out;
}

DecodeResult decode_ft(const HorizonProblem& hp, const VectorXd& u_hat,
                       const VectorXd& u_ini, double rho2_ini, const PhaseSwitch& u_prev) {
    const int n = hp.dim();
    if (u_hat.size() != n || u_ini.size() != n)
        throw std::invalid_argument("decode_ft: dimension mismatch");

    const auto t0 = std::chrono::steady_clock::now();

    const RowMajorMatrix& Vrm = hp.V_rows;
    FtSearch s{.V = Vrm, .u_hat = u_hat, .levels = n,
               .U = VectorXd::Zero(n), .best = u_ini, .rho2 = rho2_ini};
    s.search(0, 0.0, u_prev.as_vector());

    DecodeResult res;
    res.u_opt = std::move(s.best);
    res.cost = s.rho2;
    res.nodes_visited = s.nodes;
    res.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace fcs
