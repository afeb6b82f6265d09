#include "fcs/sphere_fl.hpp"

#include <chrono>

namespace fcs {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int round_to_level(double v) {
    const int r = int(std::lround(v));
    return std::clamp(r, -1, 1);
}

PhaseSwitch switch_at(const VectorXd& U, int step4) {
    return {int(std::lround(U(step4))), int(std::lround(U(step4 + 1))),
            int(std::lround(U(step4 + 2)))};
}

// Recompute the dependent slack entries in place from the switch entries.
void impose_slack_structure(VectorXd& U, const SlackContext& ctx, const PhaseSwitch& u_prev) {
    const int N_p = int(U.size()) / 4;
    PhaseSwitch up = u_prev;
    FilterState x = ctx.x_sw_init;
    for (int s = 0; s < N_p; ++s) {
        const PhaseSwitch u = switch_at(U, 4 * s);
        auto [xn, sn] = slack_eval(ctx, x, u, up);
        U(4 * s + 3) = sn;
        x = xn;
        up = u;
    }
}

struct FlSearch {
    const RowMajorMatrix& V;
    const VectorXd& u_hat;
    const SlackContext& ctx;
    double lambda_sw;
    int levels;
    bool use_bound;
    VectorXd U;
    VectorXd best;
    double rho2;
    std::uint64_t nodes = 0;

    // l is 0-based; x_sw is the estimator state at the step owning level l;
    // dbar2 is the future-cost bound attached to that state.
    void search(int l, double d2, const Eigen::Vector3d& u_prev, const FilterState& x_sw,
                double dbar2) {
        const int step = l / 4;
        const int j = l - 4 * step;
        const bool switch_level = j < 3;

        int n_candidates = 3;
        double singleton = 0.0;
        FilterState x_next = x_sw;
        double dbar2_next = dbar2;
        if (!switch_level) {
            n_candidates = 1;
            const PhaseSwitch u_cur = switch_at(U, 4 * step);
            const PhaseSwitch up{int(std::lround(u_prev(0))), int(std::lround(u_prev(1))),
                                 int(std::lround(u_prev(2)))};
            auto [xn, sn] = slack_eval(ctx, x_sw, u_cur, up);
            x_next = xn;
            singleton = sn;
            const int remaining = levels / 4 - (step + 1);
            dbar2_next = use_bound ? prop1_bound(ctx, x_next, remaining, lambda_sw) : 0.0;
        }

        for (int ci = 0; ci < n_candidates; ++ci) {
            const double u = switch_level ? double(ci - 1) : singleton;
            U(l) = u;
            const double* vrow = V.data() + std::size_t(l) * V.cols();
            double acc = 0.0;
            for (int t = 0; t <= l; ++t) acc += vrow[t] * U(t);
            const double resid = u_hat(l) - acc;
            const double d2n = d2 + resid * resid;
            ++nodes;
            const double bound = switch_level ? dbar2 : dbar2_next;
            if (d2n + bound < rho2) {
                if (l + 1 < levels) {
                    if (switch_level) {
                        search(l + 1, d2n, u_prev, x_sw, dbar2);
                    } else {
                        search(l + 1, d2n, U.segment<3>(4 * step), x_next, dbar2_next);
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

SlackContext make_slack_context(const HorizonProblem& hp, const FilterState& x_sw,
                                double f_star) {
    if (hp.kind != ControllerKind::FL)
        throw std::invalid_argument("make_slack_context: FL problem required");
    SlackContext ctx{hp.filter_mats, {kFreqScale * x_sw.x1, kFreqScale * x_sw.x2},
                     kFreqScale * f_star, hp.c_a_pow};
    ctx.fm.B *= kFreqScale;
    return ctx;
}

SlackContext raw_slack_context(const FilterMatrices& fm, const FilterState& x_sw,
                               double f_star, int N_p) {
    SlackContext ctx{fm, x_sw, f_star, {}};
    ctx.c_a_pow.resize(std::size_t(N_p));
    Eigen::RowVector2d ca = fm.C;
    for (int n = 0; n < N_p; ++n) {
        ca = ca * fm.A;
        ctx.c_a_pow[std::size_t(n)] = ca;
    }
    return ctx;
}

std::pair<FilterState, double> slack_eval(const SlackContext& ctx, const FilterState& x,
                                          const PhaseSwitch& u, const PhaseSwitch& u_prev) {
    const FilterState xn = step_filter(ctx.fm, x, transitions(u, u_prev));
    return {xn, slack(xn.output(), ctx.f_star)};
}

double prop1_bound(const SlackContext& ctx, const FilterState& x, int remaining,
                   double lambda_sw) {
    if (remaining < 0) throw std::invalid_argument("prop1_bound: remaining must be >= 0");
    if (remaining > int(ctx.c_a_pow.size()))
        throw std::invalid_argument("prop1_bound: remaining exceeds precomputed powers");
    double acc = 0.0;
    const Eigen::Vector2d xv = x.as_vector();
    for (int n = 1; n <= remaining; ++n) {
        const double v = ctx.c_a_pow[n - 1].dot(xv) - ctx.f_star;
        if (v > 0.0) acc += v * v;
    }
    return lambda_sw * acc;
}

InitialSolution initial_solution_fl(const HorizonProblem& hp, const UnconstrainedPoint& pt,
                                    const SlackContext& ctx, const PhaseSwitch& u_prev,
                                    const VectorXd* previous_opt) {
    const int n = hp.dim();

    VectorXd babai = VectorXd::Zero(n);
    for (int s = 0; s < hp.N_p; ++s)
        for (int j = 0; j < 3; ++j) babai(4 * s + j) = round_to_level(pt.u_unc(4 * s + j));
    impose_slack_structure(babai, ctx, u_prev);

    InitialSolution out{babai, ils_cost(hp, pt.u_hat, babai)};

    if (previous_opt != nullptr && previous_opt->size() == n) {
        VectorXd guess(n);
        guess.head(n - 4) = previous_opt->tail(n - 4);
        guess.tail(4) = previous_opt->tail(4);
        impose_slack_structure(guess, ctx, u_prev);
        const double c = ils_cost(hp, pt.u_hat, guess);
        if (c < out.rho2) out = {guess, c};
    }
    return out;
}

DecodeResult decode_fl(const HorizonProblem& hp, const VectorXd& u_hat,
                       const VectorXd& u_ini, double rho2_ini, const SlackContext& ctx,
                       const PhaseSwitch& u_prev, bool use_bound) {
    const int n = hp.dim();
    if (u_hat.size() != n || u_ini.size() != n)
        throw std::invalid_argument("decode_fl: dimension mismatch");

    const auto t0 = std::chrono::steady_clock::now();

    const RowMajorMatrix& Vrm = hp.V_rows;
    FlSearch s{.V = Vrm, .u_hat = u_hat, .ctx = ctx, .lambda_sw = hp.lambda_sw,
               .levels = n, .use_bound = use_bound, .U = VectorXd::Zero(n),
               .best = u_ini, .rho2 = rho2_ini};
    const double dbar2_root =
        use_bound ? prop1_bound(ctx, ctx.x_sw_init, hp.N_p, hp.lambda_sw) : 0.0;
    s.search(0, 0.0, u_prev.as_vector(), ctx.x_sw_init, dbar2_root);

    DecodeResult res;
    res.u_opt = std::move(s.best);
    res.cost = s.rho2;
    res.nodes_visited = s.nodes;
    res.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace fcs
