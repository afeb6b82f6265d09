#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcs/oracle.hpp"
#include "fcs/sphere_fl.hpp"
#include "fcs/verify.hpp"

#include <random>

using namespace fcs;

namespace {

const RunParams kParams{};

PhaseSwitch random_switch(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> lvl(-1, 1);
    return {lvl(rng), lvl(rng), lvl(rng)};
}

bool slack_entries_consistent(const VectorXd& U, const SlackContext& ctx,
                              const PhaseSwitch& u_prev, double tol) {
    const int N_p = int(U.size()) / 4;
    PhaseSwitch up = u_prev;
    FilterState x = ctx.x_sw_init;
    for (int s = 0; s < N_p; ++s) {
        const PhaseSwitch u{int(std::lround(U(4 * s))), int(std::lround(U(4 * s + 1))),
                            int(std::lround(U(4 * s + 2)))};
        auto [xn, sn] = slack_eval(ctx, x, u, up);
        if (std::abs(U(4 * s + 3) - sn) > tol) return false;
        x = xn;
        up = u;
    }
    return true;
}

}  // namespace

TEST_CASE("slack evaluation single steps") {
    const FilterMatrices fm = filter_matrices(kParams.filter);

    SUBCASE("no transitions from rest") {
        const SlackContext ctx = raw_slack_context(fm, {0, 0}, 250.0, 5);
        auto [x, s] = slack_eval(ctx, {0, 0}, {1, 0, -1}, {1, 0, -1});
        CHECK(x.x1 == 0.0);
        CHECK(x.x2 == 0.0);
        CHECK(s == 0.0);
    }
    SUBCASE("a full transition set from rest stays under the bound") {
        const SlackContext ctx = raw_slack_context(fm, {0, 0}, 250.0, 5);
        auto [x, s] = slack_eval(ctx, {0, 0}, {1, 1, 1}, {0, 0, 0});
        CHECK(x.x1 == doctest::Approx(25.0).epsilon(1e-12));
        CHECK(x.x2 == 0.0);
        CHECK(s == 0.0);
    }
    SUBCASE("decay from a violating state") {
        const SlackContext ctx = raw_slack_context(fm, {0, 300}, 250.0, 5);
        auto [x, s] = slack_eval(ctx, {0, 300}, {0, 0, 0}, {0, 0, 0});
        CHECK(x.x1 == 0.0);
        CHECK(x.x2 == doctest::Approx(297.0).epsilon(1e-12));
        CHECK(s == doctest::Approx(47.0).epsilon(1e-12));
    }
}

TEST_CASE("future-cost bound: zero state, worked value, admissibility") {
    const FilterMatrices fmx = filter_matrices(kParams.filter);

    const SlackContext zero = raw_slack_context(fmx, {0, 0}, 250.0, 5);
    for (int rem = 0; rem <= 5; ++rem)
        CHECK(prop1_bound(zero, {0, 0}, rem, 60.0) == 0.0);

    const SlackContext ctx = raw_slack_context(fmx, {0, 300}, 250.0, 5);
    CHECK(prop1_bound(ctx, {0, 300}, 0, 60.0) == 0.0);
    const double hand = prop1_bound(ctx, {0, 300}, 2, 60.0);
    CHECK(hand == doctest::Approx(248858.454).epsilon(1e-6));

    // Monte-Carlo admissibility against rollouts with arbitrary switching.
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> freq(0.0, 500.0);
    std::uniform_real_distribution<double> fstar(0.0, 400.0);
    std::uniform_int_distribution<int> rem(0, 5);
    const FilterMatrices fm = fmx;
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const FilterState x{freq(rng), freq(rng)};
        const double fs = fstar(rng);
        const int remaining = rem(rng);
        const SlackContext c = raw_slack_context(fm, x, fs, 5);
        const double bound = prop1_bound(c, x, remaining, 60.0);

        PhaseSwitch up = random_switch(rng);
        FilterState xs = x;
        double js = 0.0;
        for (int n = 0; n < remaining; ++n) {
            const PhaseSwitch u = random_switch(rng);
            xs = step_filter(fm, xs, transitions(u, up));
            const double s = slack(xs.output(), fs);
            js += 60.0 * s * s;
            up = u;
        }
        if (bound > js + 1e-9 * std::max(1.0, js)) ++violations;
    }
    CHECK(violations == 0);

    // scaling the state up never lowers the bound
    for (int i = 0; i < 100; ++i) {
        const FilterState x{freq(rng), freq(rng)};
        const double c = 1.0 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        const SlackContext cc = raw_slack_context(fm, x, 250.0, 5);
        CHECK(prop1_bound(cc, {c * x.x1, c * x.x2}, 5, 60.0) >=
              prop1_bound(cc, x, 5, 60.0) - 1e-12);
    }
}

TEST_CASE("a consistent lattice point is recovered with zero residual") {
    std::mt19937_64 rng(8);
    const int N_p = 2;
    const HorizonProblem hp =
        assemble_fl(kParams.sys, kParams.filter, kParams.weights, N_p, 250.0);
    const FilterState x_sw{240.0, 260.0};
    const SlackContext ctx = make_slack_context(hp, x_sw, 250.0);

    const PhaseSwitch u_prev = random_switch(rng);
    std::vector<PhaseSwitch> seq(N_p);
    for (auto& u : seq) u = random_switch(rng);
    // build the candidate through the decoder's own slack channel
    VectorXd U(4 * N_p);
    {
        PhaseSwitch up = u_prev;
        FilterState xs = ctx.x_sw_init;
        for (int s2 = 0; s2 < N_p; ++s2) {
            auto [xn, sn] = slack_eval(ctx, xs, seq[s2], up);
            U(4 * s2) = seq[s2].a;
            U(4 * s2 + 1) = seq[s2].b;
            U(4 * s2 + 2) = seq[s2].c;
            U(4 * s2 + 3) = sn;
            xs = xn;
            up = seq[s2];
        }
    }
    const VectorXd u_hat = hp.V * U;

    const DecodeResult res = decode_fl(hp, u_hat, U, 0.0, ctx, u_prev, true);
    CHECK(res.cost == 0.0);
    CHECK((res.u_opt - U).norm() == 0.0);
}

TEST_CASE("decoder matches the exhaustive oracle, bound on and off") {
    std::mt19937_64 rng(2025);
    const PlantMatrices pm = discretize(kParams.sys);
    const FilterMatrices fm = filter_matrices(kParams.filter);

    for (int N_p : {1, 2}) {
        const HorizonProblem hp =
            assemble_fl(kParams.sys, kParams.filter, kParams.weights, N_p, 250.0);
        for (int i = 0; i < 100; ++i) {
            const FlInstance in = random_fl_instance(rng, kParams, N_p);
            const SlackContext ctx = make_slack_context(hp, in.x_sw, in.f_star);
            const UnconstrainedPoint pt =
                linear_term(hp, in.x_ph.as_vector(), in.v_g_abc, in.y_ref, in.u_prev);
            const InitialSolution ini = initial_solution_fl(hp, pt, ctx, in.u_prev);

            const DecodeResult on =
                decode_fl(hp, pt.u_hat, ini.u, ini.rho2, ctx, in.u_prev, true);
            const DecodeResult off =
                decode_fl(hp, pt.u_hat, ini.u, ini.rho2, ctx, in.u_prev, false);

            // both settings return the same optimum, the bound only prunes
            CHECK(on.cost == doctest::Approx(off.cost).epsilon(1e-12));
            CHECK((on.u_opt - off.u_opt).norm() == 0.0);
            CHECK(on.nodes_visited <= off.nodes_visited);

            const OracleResult orc = enumerate_fl(pm, fm, kParams.weights, N_p, in);
            std::vector<PhaseSwitch> dec_seq(N_p);
            for (int s = 0; s < N_p; ++s)
                dec_seq[s] = {int(std::lround(on.u_opt(4 * s))),
                              int(std::lround(on.u_opt(4 * s + 1))),
                              int(std::lround(on.u_opt(4 * s + 2)))};
            const double stage_dec = rollout_cost_fl(pm, fm, kParams.weights, in, dec_seq);
            CHECK(std::abs(stage_dec - orc.cost) <= 1e-9);
            const double ils_orc = ils_cost(
                hp, pt.u_hat,
                feasible_vector_fl(orc.sequence, in.u_prev, fm, in.x_sw, in.f_star));
            CHECK(std::abs(ils_orc - on.cost) <= 1e-9);

            // returned slack entries match an independent rollout
            CHECK(slack_entries_consistent(on.u_opt, ctx, in.u_prev, 1e-9));
            CHECK(on.cost <= ini.rho2 + 1e-12);
        }
    }
}

TEST_CASE("warm start from rest solves the trivial instance outright") {
    const int N_p = 3;
    const HorizonProblem hp =
        assemble_fl(kParams.sys, kParams.filter, kParams.weights, N_p, 250.0);
    const SlackContext ctx = make_slack_context(hp, {0, 0}, 250.0);
    const UnconstrainedPoint pt = linear_term(hp, Eigen::Vector2d::Zero(),
                                              Eigen::Vector3d::Zero(),
                                              VectorXd::Zero(2 * N_p), {0, 0, 0});
    const InitialSolution ini = initial_solution_fl(hp, pt, ctx, {0, 0, 0});
    CHECK(ini.u.norm() == 0.0);
    CHECK(ini.rho2 == 0.0);
}

TEST_CASE("warm start never undercuts the oracle optimum") {
    std::mt19937_64 rng(66);
    const PlantMatrices pm = discretize(kParams.sys);
    const FilterMatrices fm = filter_matrices(kParams.filter);
    const int N_p = 2;
    const HorizonProblem hp =
        assemble_fl(kParams.sys, kParams.filter, kParams.weights, N_p, 250.0);
    for (int i = 0; i < 50; ++i) {
        const FlInstance in = random_fl_instance(rng, kParams, N_p);
        const SlackContext ctx = make_slack_context(hp, in.x_sw, in.f_star);
        const UnconstrainedPoint pt =
            linear_term(hp, in.x_ph.as_vector(), in.v_g_abc, in.y_ref, in.u_prev);
        const InitialSolution ini = initial_solution_fl(hp, pt, ctx, in.u_prev);
        CHECK(slack_entries_consistent(ini.u, ctx, in.u_prev, 1e-12));

        const OracleResult orc = enumerate_fl(pm, fm, kParams.weights, N_p, in);
        const double ils_orc = ils_cost(
            hp, pt.u_hat,
            feasible_vector_fl(orc.sequence, in.u_prev, fm, in.x_sw, in.f_star));
        CHECK(ini.rho2 >= ils_orc - 1e-9);
    }
}
