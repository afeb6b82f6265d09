#include "fcs/oracle.hpp"

#include "fcs/horizon.hpp"

namespace fcs {

namespace {

constexpr int kMaxOracleHorizon = 4;

std::uint64_t pow3(int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
}

// Decode enumeration index into a switch sequence, lexicographic order with
// the first step's a-phase as the most significant digit.
void index_to_sequence(std::uint64_t idx, int N_p, std::vector<PhaseSwitch>& seq) {
    seq.resize(N_p);
    for (int s = N_p - 1; s >= 0; --s) {
        const int c = int(idx % 3) - 1; idx /= 3;
        const int b = int(idx % 3) - 1; idx /= 3;
        const int a = int(idx % 3) - 1; idx /= 3;
        seq[s] = {a, b, c};
    }
}

}  // namespace

double rollout_cost_ft(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                       const FtInstance& inst, std::span<const PhaseSwitch> seq) {
    AlphaBetaVector x = inst.x_ph;
    FilterState xsw = inst.x_sw;
    PhaseSwitch up = inst.u_prev;
    double cost = 0.0;
    for (std::size_t l = 0; l < seq.size(); ++l) {
        const PhaseSwitch& u = seq[l];
        const TransitionVector p = transitions(u, up);
        x = step_plant(pm, x, u, inst.v_g_abc);
        xsw = step_filter(fm, xsw, p);
        const double ea = inst.y_ref(3 * l) - x.alpha;
        const double eb = inst.y_ref(3 * l + 1) - x.beta;
        const double ef = (inst.y_ref(3 * l + 2) - xsw.output()) * kFreqScale;
        cost += ea * ea + eb * eb + w.lambda_sw * ef * ef
              + w.lambda_u * double(p.a * p.a + p.b * p.b + p.c * p.c);
        up = u;
    }
    return cost;
}

double rollout_cost_fl(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                       const FlInstance& inst, std::span<const PhaseSwitch> seq) {
    AlphaBetaVector x = inst.x_ph;
    FilterState xsw = inst.x_sw;
    PhaseSwitch up = inst.u_prev;
    double cost = 0.0;
    for (std::size_t l = 0; l < seq.size(); ++l) {
        const PhaseSwitch& u = seq[l];
        const TransitionVector p = transitions(u, up);
        x = step_plant(pm, x, u, inst.v_g_abc);
        xsw = step_filter(fm, xsw, p);
        const double s = slack(xsw.output(), inst.f_star) * kFreqScale;
        const double ea = inst.y_ref(2 * l) - x.alpha;
        const double eb = inst.y_ref(2 * l + 1) - x.beta;
        cost += ea * ea + eb * eb + w.lambda_sw * s * s
              + w.lambda_u * double(p.a * p.a + p.b * p.b + p.c * p.c);
        up = u;
    }
    return cost;
}

OracleResult enumerate_ft(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                          int N_p, const FtInstance& inst) {
    if (N_p < 1 || N_p > kMaxOracleHorizon)
        throw std::invalid_argument("enumerate_ft: N_p must be in [1,4]");
    if (inst.y_ref.size() != 3 * N_p)
        throw std::invalid_argument("enumerate_ft: reference dimension mismatch");

    OracleResult best;
    std::vector<PhaseSwitch> seq;
    const std::uint64_t total = pow3(3 * N_p);
    for (std::uint64_t i = 0; i < total; ++i) {
        index_to_sequence(i, N_p, seq);
        const double c = rollout_cost_ft(pm, fm, w, inst, seq);
        if (i == 0 || c < best.cost) {
            best.cost = c;
            best.sequence = seq;
        }
    }
    best.evaluated = total;
    return best;
}

OracleResult enumerate_fl(const PlantMatrices& pm, const FilterMatrices& fm, const CostWeights& w,
                          int N_p, const FlInstance& inst) {
    if (N_p < 1 || N_p > kMaxOracleHorizon)
        throw std::invalid_argument("enumerate_fl: N_p must be in [1,4]");
    if (inst.y_ref.size() != 2 * N_p)
        throw std::invalid_argument("enumerate_fl: reference dimension mismatch");

    OracleResult best;
    std::vector<PhaseSwitch> seq;
    const std::uint64_t total = pow3(3 * N_p);
    for (std::uint64_t i = 0; i < total; ++i) {
        index_to_sequence(i, N_p, seq);
        const double c = rollout_cost_fl(pm, fm, w, inst, seq);
        if (i == 0 || c < best.cost) {
            best.cost = c;
            best.sequence = seq;
        }
    }
    best.evaluated = total;
    return best;
}

VectorXd feasible_vector_ft(std::span<const PhaseSwitch> seq, const PhaseSwitch& u_prev) {
    const int N_p = int(seq.size());
    VectorXd U(6 * N_p);
    PhaseSwitch up = u_prev;
    for (int s = 0; s < N_p; ++s) {
        const TransitionVector p = transitions(seq[s], up);
        U(6 * s) = seq[s].a;
        U(6 * s + 1) = seq[s].b;
        U(6 * s + 2) = seq[s].c;
        U(6 * s + 3) = p.a;
        U(6 * s + 4) = p.b;
        U(6 * s + 5) = p.c;
        up = seq[s];
    }
    return U;
}

VectorXd feasible_vector_fl(std::span<const PhaseSwitch> seq, const PhaseSwitch& u_prev,
                            const FilterMatrices& fm, const FilterState& x_sw, double f_star) {
    const int N_p = int(seq.size());
    VectorXd U(4 * N_p);
    PhaseSwitch up = u_prev;
    FilterState xsw = x_sw;
    for (int s = 0; s < N_p; ++s) {
        xsw = step_filter(fm, xsw, transitions(seq[s], up));
        U(4 * s) = seq[s].a;
        U(4 * s + 1) = seq[s].b;
        U(4 * s + 2) = seq[s].c;
        U(4 * s + 3) = slack(xsw.output(), f_star) * kFreqScale;
        up = seq[s];
    }
    return U;
}

}  // namespace fcs
