#pragma once

#include "fcs/horizon.hpp"
#include "fcs/types.hpp"

#include <string>
#include <vector>

namespace fcs {

/// Piecewise-linear profile: `initial` before t_start, linear to `final_`
/// by t_end, constant after. t_start == t_end makes it a step.
struct RampProfile {
    double initial = 0.0;
    double final_ = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;

    double at(double t) const {
        if (t < t_start) return initial;
        if (t >= t_end) return final_;
        return initial + (final_ - initial) * (t - t_start) / (t_end - t_start);
    }
    static RampProfile constant(double v) { return {v, v, 0.0, 0.0}; }
    static RampProfile step(double v0, double v1, double t) { return {v0, v1, t, t}; }
};

enum class ScenarioKind { SteadyState, PowerRamp, PowerStep, FswStep };

struct Scenario {
    ScenarioKind kind = ScenarioKind::SteadyState;
    std::string name = "steady";
    double duration = 1.5;
    RampProfile P = RampProfile::constant(1.0);
    RampProfile Q = RampProfile::constant(0.0);
    RampProfile f_star = RampProfile::constant(250.0);
    double window_t0 = 0.5;
    double window_T = 1.0;

    void validate() const {
        if (!(duration > 0.0)) throw std::invalid_argument("Scenario: duration must be > 0");
        if (window_t0 < 0.0 || window_t0 + window_T > duration + 1e-12)
            throw std::invalid_argument("Scenario: window must lie within the duration");
    }
};

/// Everything one closed-loop run needs besides the scenario.
struct RunParams {
    SystemParams sys;
    FilterParams filter{0.99, 0.99, 1e-4};   // controller estimator
    double a1_visual = 0.995;                // reporting-only estimator
    double a2_visual = 0.995;
    CostWeights weights;
    int N_p = 5;
    double f_sw_ref = 250.0;
    double T_sim = 1e-6;

    // Scenario magnitudes (profiles are not stated numerically everywhere).
    double ramp_P0 = 0.3, ramp_P1 = 1.0;
    double step_P0 = 0.3, step_P1 = 1.0;
    double fswstep_f0 = 250.0, fswstep_f1 = 300.0;

    void validate() const;
};

std::vector<Scenario> builtin_scenarios(const RunParams& rp);
Scenario scenario_by_name(const RunParams& rp, const std::string& name);

struct TraceRow {
    double t = 0.0;
    AlphaBetaVector i_ref;
    AlphaBetaVector i;
    PhaseSwitch u;
    TransitionVector p;
    double fsw = 0.0;
    double fsw_visual = 0.0;
    double fsw_ref = 0.0;
    double solve_us = 0.0;
    std::uint64_t nodes = 0;
};

/// One closed-loop run: a row per control step plus the current waveform at
/// plant-integration resolution. Write-once, then immutable.
struct SimTrace {
    std::vector<TraceRow> rows;
    std::vector<AlphaBetaVector> substeps;  // sample m is the state at (m+1)*T_sim
    double T_s = 1e-4;
    double T_sim = 1e-6;
    double f1 = 50.0;
    Scenario scenario;
    ControllerKind controller = ControllerKind::FT;
    bool bound_used = true;
};

/// Receding-horizon loop: assemble the step's ILS instance, warm start,
/// decode, apply the first input over one control interval integrated at
/// T_sim sub-steps (grid voltage held at the step's sample), advance both
/// estimators, log. Solve time covers reference assembly through decode.
SimTrace run_closed_loop(const Scenario& sc, ControllerKind kind, const RunParams& rp,
                         bool use_bound = true);

}  // namespace fcs
