#include "fcs/simulator.hpp"

#include "fcs/plant.hpp"
#include "fcs/sphere_fl.hpp"
#include "fcs/sphere_ft.hpp"
#include "fcs/swfreq.hpp"

#include <chrono>

namespace fcs {

void RunParams::validate() const {
    sys.validate();
    filter.validate();
    weights.validate();
    if (N_p < 1) throw std::invalid_argument("RunParams: N_p must be >= 1");
    if (!(f_sw_ref >= 0.0)) throw std::invalid_argument("RunParams: f_sw_ref must be >= 0");
    if (!(T_sim > 0.0)) throw std::invalid_argument("RunParams: T_sim must be > 0");
    const double ratio = sys.T_s / T_sim;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio || ratio < 1.0)
        throw std::invalid_argument("RunParams: T_s must be an integer multiple of T_sim");
    if (std::abs(filter.T_s - sys.T_s) > 1e-15)
        throw std::invalid_argument("RunParams: filter T_s must equal the control interval");
}

std::vector<Scenario> builtin_scenarios(const RunParams& rp) {
    const double T1 = 1.0 / rp.sys.f1;  // fundamental period
    std::vector<Scenario> out;

    Scenario steady;
    steady.kind = ScenarioKind::SteadyState;
    steady.name = "steady";
    steady.duration = 1.5;
    steady.P = RampProfile::constant(1.0);
    steady.Q = RampProfile::constant(0.0);
    steady.f_star = RampProfile::constant(rp.f_sw_ref);
    steady.window_t0 = 0.5;
    steady.window_T = 1.0;
    out.push_back(steady);

    Scenario ramp;
    ramp.kind = ScenarioKind::PowerRamp;
    ramp.name = "ramp";
    ramp.duration = 1.25;
    ramp.P = RampProfile{rp.ramp_P0, rp.ramp_P1, 1.205, 1.205 + T1};
    ramp.Q = RampProfile::constant(0.0);
    ramp.f_star = RampProfile::constant(rp.f_sw_ref);
    ramp.window_t0 = 1.205;
    ramp.window_T = T1;
    out.push_back(ramp);

    Scenario step;
    step.kind = ScenarioKind::PowerStep;
    step.name = "step";
    step.duration = 0.65;
    step.P = RampProfile::step(rp.step_P0, rp.step_P1, 0.6);
    step.Q = RampProfile::constant(0.0);
    step.f_star = RampProfile::constant(rp.f_sw_ref);
    step.window_t0 = 0.6;
    step.window_T = T1;
    out.push_back(step);

    Scenario fswstep;
    fswstep.kind = ScenarioKind::FswStep;
    fswstep.name = "fswstep";
    fswstep.duration = 0.45;
    fswstep.P = RampProfile::constant(1.0);
    fswstep.Q = RampProfile::constant(0.0);
    fswstep.f_star = RampProfile::step(rp.fswstep_f0, rp.fswstep_f1, 0.4);
    fswstep.window_t0 = 0.4;
    fswstep.window_T = T1;
    out.push_back(fswstep);

    return out;
}

Scenario scenario_by_name(const RunParams& rp, const std::string& name) {
    for (const Scenario& s : builtin_scenarios(rp))
        if (s.name == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}

namespace {

AlphaBetaVector reference_or_zero(double P, double Q, const AlphaBetaVector& v_g) {
    // A dead grid admits only a zero reference; anything else is an error.
    if (v_g.alpha * v_g.alpha + v_g.beta * v_g.beta <= 1e-24) {
        if (P != 0.0 || Q != 0.0)
            throw std::invalid_argument("run_closed_loop: nonzero power demand at zero grid voltage");
        return {0.0, 0.0};
    }
    return current_reference(P, Q, v_g);
}

}  // namespace

SimTrace run_closed_loop(const Scenario& sc, ControllerKind kind, const RunParams& rp,
                         bool use_bound) {
    sc.validate();
    rp.validate();

    const double f_star0 = sc.f_star.at(0.0);
    const HorizonProblem hp =
        kind == ControllerKind::FT
            ? assemble_ft(rp.sys, rp.filter, rp.weights, rp.N_p)
            : assemble_fl(rp.sys, rp.filter, rp.weights, rp.N_p, f_star0);

    const PlantMatrices plant_step = discretize(rp.sys);
    const PlantMatrices plant_sub = discretize_dt(rp.sys, rp.T_sim);
    const FilterMatrices ctrl_filter = filter_matrices(rp.filter);
    const FilterMatrices vis_filter =
        filter_matrices({rp.a1_visual, rp.a2_visual, rp.sys.T_s});

    const int steps = int(std::llround(sc.duration / rp.sys.T_s));
    const int subs = int(std::llround(rp.sys.T_s / rp.T_sim));
    const double step_rotation = rp.sys.omega_base() * rp.sys.T_s;

    SimTrace trace;
    trace.T_s = rp.sys.T_s;
    trace.T_sim = rp.T_sim;
    trace.f1 = rp.sys.f1;
    trace.scenario = sc;
    trace.controller = kind;
    trace.bound_used = kind == ControllerKind::FL ? use_bound : true;
    trace.rows.reserve(steps);
    trace.substeps.reserve(std::size_t(steps) * subs);

    // Plant starts on the instantaneous current reference, estimators at the
    // frequency reference; measurement windows begin after any remaining
    // startup transient has settled.
    AlphaBetaVector x_ph =
        reference_or_zero(sc.P.at(0.0), sc.Q.at(0.0), clarke(grid_voltage(rp.sys, 0.0)));
    FilterState x_sw{f_star0, f_star0};
    FilterState x_sw_vis{f_star0, f_star0};
    PhaseSwitch u_prev{0, 0, 0};
    VectorXd previous_opt;

    for (int k = 0; k < steps; ++k) {
        const double t = k * rp.sys.T_s;
        const Eigen::Vector3d v_g = grid_voltage(rp.sys, t);
        const AlphaBetaVector v_g_ab = clarke(v_g);
        const double P = sc.P.at(t);
        const double Q = sc.Q.at(t);
        const double f_star = sc.f_star.at(t);

        const auto t_solve0 = std::chrono::steady_clock::now();
        const AlphaBetaVector i_ref = reference_or_zero(P, Q, v_g_ab);
        const VectorXd y_ref = reference_stack(hp, i_ref, step_rotation, f_star);

        DecodeResult res;
        if (kind == ControllerKind::FT) {
            Eigen::Vector4d x_t;
            x_t << x_ph.alpha, x_ph.beta, x_sw.x1, x_sw.x2;
            const UnconstrainedPoint pt = linear_term(hp, x_t, v_g, y_ref, u_prev);
            const InitialSolution ini = initial_solution_ft(
                hp, pt, u_prev, previous_opt.size() ? &previous_opt : nullptr);
            res = decode_ft(hp, pt.u_hat, ini.u, ini.rho2, u_prev);
        } else {
            const SlackContext ctx = make_slack_context(hp, x_sw, f_star);
            const UnconstrainedPoint pt =
                linear_term(hp, x_ph.as_vector(), v_g, y_ref, u_prev);
            const InitialSolution ini = initial_solution_fl(
                hp, pt, ctx, u_prev, previous_opt.size() ? &previous_opt : nullptr);
            res = decode_fl(hp, pt.u_hat, ini.u, ini.rho2, ctx, u_prev, use_bound);
        }
        const double solve_us =
            std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                      t_solve0)
                .count();

        const PhaseSwitch u{int(std::lround(res.u_opt(0))), int(std::lround(res.u_opt(1))),
                            int(std::lround(res.u_opt(2)))};
        const TransitionVector p = transitions(u, u_prev);

        trace.rows.push_back({t, i_ref, x_ph, u, p, x_sw.output(), x_sw_vis.output(),
                              f_star, solve_us, res.nodes_visited});

        // T_sim affects logging granularity only: the trajectory advances with
        // the exact one-interval map, the waveform samples are derived from
        // the interval's start state (both exact under held inputs).
        AlphaBetaVector x_fine = x_ph;
        for (int m = 0; m < subs; ++m) {
            x_fine = step_plant(plant_sub, x_fine, u, v_g);
            trace.substeps.push_back(x_fine);
        }
        x_ph = step_plant(plant_step, x_ph, u, v_g);
        x_sw = step_filter(ctrl_filter, x_sw, p);
        x_sw_vis = step_filter(vis_filter, x_sw_vis, p);
        u_prev = u;
        previous_opt = res.u_opt;
    }
    return trace;
}

}  // namespace fcs
