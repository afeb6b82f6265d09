#include "fcssphere.h"

#include "fcs/config.hpp"
#include "fcs/metrics.hpp"
#include "fcs/plant.hpp"
#include "fcs/verify.hpp"

#include <cstring>
#include <string>

struct fcs_config {
    fcs::RunConfig cfg;
};

struct fcs_trace {
    fcs::SimTrace trace;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

fcs_status fail(fcs_status code, const char* what) {
    set_error(what);
    return code;
}

template <typename Fn>
fcs_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const fcs::NotPositiveDefinite& e) {
        return fail(FCS_ERR_NOT_POSITIVE_DEFINITE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(FCS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(FCS_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(FCS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FCS_ERR_INTERNAL, "unknown exception");
    }
}

const char* scenario_name(fcs_scenario_id id) {
    switch (id) {
        case FCS_SCENARIO_STEADY: return "steady";
        case FCS_SCENARIO_RAMP: return "ramp";
        case FCS_SCENARIO_STEP: return "step";
        case FCS_SCENARIO_FSWSTEP: return "fswstep";
    }
    return nullptr;
}

void fill_metrics(const fcs::SimTrace& tr, double t0, double T, fcs_metrics* out) {
    const fcs::Metrics m = fcs::compute_metrics(tr, t0, T);
    out->tdd_percent = m.tdd_percent;
    out->tracking_error_percent = m.tracking_error_percent;
    out->fsw_avg_hz = m.fsw_avg_hz;
    out->solve_us_total = m.timing.solve_us_total;
    out->solve_us_max = m.timing.solve_us_max;
    out->solve_us_p70 = m.timing.solve_us_p70;
    out->solve_us_p95 = m.timing.solve_us_p95;
    out->nodes_total = m.timing.nodes_total;
    out->nodes_max = m.timing.nodes_max;
    out->nodes_p70 = m.timing.nodes_p70;
    out->nodes_p95 = m.timing.nodes_p95;
    out->window_t0 = t0;
    out->window_T = T;
}

}  // namespace

extern "C" {

const char* fcs_version(void) { return "1.0.0"; }

const char* fcs_last_error(void) { return g_last_error.c_str(); }

fcs_config* fcs_config_create(void) {
    try {
        return new fcs_config{};
    } catch (...) {
        set_error("allocation failure");
        return nullptr;
    }
}

void fcs_config_destroy(fcs_config* cfg) { delete cfg; }

fcs_status fcs_config_load(fcs_config* cfg, const char* path) {
    if (!cfg || !path) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        try {
            cfg->cfg = fcs::load_config(path);
        } catch (const std::invalid_argument& e) {
            return fail(FCS_ERR_BAD_CONFIG, e.what());
        }
        return FCS_OK;
    });
}

fcs_status fcs_config_set(fcs_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        try {
            fcs::apply_config_kv(cfg->cfg, key, value);
        } catch (const std::invalid_argument& e) {
            return fail(FCS_ERR_BAD_CONFIG, e.what());
        }
        return FCS_OK;
    });
}

fcs_status fcs_config_get(const fcs_config* cfg, const char* key, char* buf, size_t buf_size) {
    if (!cfg || !key || !buf || buf_size == 0)
        return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string v;
        try {
            v = fcs::get_config_kv(cfg->cfg, key);
        } catch (const std::invalid_argument& e) {
            return fail(FCS_ERR_BAD_CONFIG, e.what());
        }
        const size_t n = std::min(buf_size - 1, v.size());
        std::memcpy(buf, v.data(), n);
        buf[n] = '\0';
        if (v.size() >= buf_size) return fail(FCS_ERR_OUT_OF_RANGE, "buffer too small");
        return FCS_OK;
    });
}

fcs_status fcs_simulate(const fcs_config* cfg, fcs_scenario_id scenario,
                        fcs_controller controller, int use_bound, fcs_trace** out_trace) {
    if (!cfg || !out_trace) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    const char* name = scenario_name(scenario);
    if (!name) return fail(FCS_ERR_INVALID_ARGUMENT, "unknown scenario id");
    if (controller != FCS_CONTROLLER_FT && controller != FCS_CONTROLLER_FL)
        return fail(FCS_ERR_INVALID_ARGUMENT, "unknown controller id");
    *out_trace = nullptr;
    return guarded([&] {
        const fcs::Scenario sc = fcs::scenario_by_name(cfg->cfg.params, name);
        const fcs::ControllerKind kind = controller == FCS_CONTROLLER_FT
                                             ? fcs::ControllerKind::FT
                                             : fcs::ControllerKind::FL;
        auto* tr = new fcs_trace{fcs::run_closed_loop(sc, kind, cfg->cfg.params,
                                                      use_bound != 0)};
        *out_trace = tr;
        return FCS_OK;
    });
}

void fcs_trace_destroy(fcs_trace* trace) { delete trace; }

size_t fcs_trace_length(const fcs_trace* trace) {
    return trace ? trace->trace.rows.size() : 0;
}

fcs_status fcs_trace_get_row(const fcs_trace* trace, size_t index, fcs_trace_row* out_row) {
    if (!trace || !out_row) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    if (index >= trace->trace.rows.size())
        return fail(FCS_ERR_OUT_OF_RANGE, "row index out of range");
    const fcs::TraceRow& r = trace->trace.rows[index];
    const Eigen::Vector3d iref = fcs::inv_clarke(r.i_ref);
    const Eigen::Vector3d iabc = fcs::inv_clarke(r.i);
    *out_row = {r.t,
                iref(0), iref(1), iref(2),
                iabc(0), iabc(1), iabc(2),
                r.u.a, r.u.b, r.u.c,
                r.p.a, r.p.b, r.p.c,
                r.fsw, r.fsw_visual, r.fsw_ref,
                r.solve_us, r.nodes};
    return FCS_OK;
}

fcs_status fcs_trace_metrics(const fcs_trace* trace, fcs_metrics* out) {
    if (!trace || !out) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        fill_metrics(trace->trace, trace->trace.scenario.window_t0,
                     trace->trace.scenario.window_T, out);
        return FCS_OK;
    });
}

fcs_status fcs_trace_metrics_window(const fcs_trace* trace, double t0, double T,
                                    fcs_metrics* out) {
    if (!trace || !out) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        fill_metrics(trace->trace, t0, T, out);
        return FCS_OK;
    });
}

fcs_status fcs_verify(const fcs_config* cfg, uint64_t seed, unsigned flags,
                      char* report_buf, size_t buf_size, int* out_failures) {
    if (!cfg) return fail(FCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        fcs::VerifyOptions opt;
        opt.seed = seed;
        opt.perturb_hessian = (flags & FCS_VERIFY_PERTURB_HESSIAN) != 0;
        const fcs::VerifyReport rep = fcs::run_verification(cfg->cfg.params, opt);
        int failures = 0;
        for (const auto& s : rep.suites)
            if (!s.passed) ++failures;
        if (out_failures) *out_failures = failures;
        if (report_buf && buf_size > 0) {
            const std::string text = rep.text();
            const size_t n = std::min(buf_size - 1, text.size());
            std::memcpy(report_buf, text.data(), n);
            report_buf[n] = '\0';
        }
        return FCS_OK;
    });
}

}  // extern "C"
