// fcs-sphere: closed-loop FCS-MPC benchmark driver on top of the fcssphere
// C API. `simulate` runs scenario x controller combinations and writes trace
// CSVs plus a summary; `verify` runs the seeded property suites.

#include "fcssphere.h"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace {

struct RunSpec {
    std::string scenario;
    fcs_scenario_id scenario_id = FCS_SCENARIO_STEADY;
    std::string controller;  // "ft" | "fl"
    bool use_bound = true;
};

struct RunOutcome {
    RunSpec spec;
    fcs_metrics metrics{};
    std::string csv_path;
    bool ok = false;
    std::string error;
};

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

fcs_scenario_id scenario_id_of(const std::string& name) {
    if (name == "steady") return FCS_SCENARIO_STEADY;
    if (name == "ramp") return FCS_SCENARIO_RAMP;
    if (name == "step") return FCS_SCENARIO_STEP;
    if (name == "fswstep") return FCS_SCENARIO_FSWSTEP;
    throw CLI::ValidationError("unknown scenario: " + name);
}

std::string run_label(const RunSpec& s) {
    std::string label = s.scenario + "_" + s.controller;
    if (s.controller == "fl" && !s.use_bound) label += "_nobound";
    return label;
}

void write_trace_csv(const fcs_trace* trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,i_ref_a,i_ref_b,i_ref_c,i_a,i_b,i_c,u_a,u_b,u_c,"
           "p_a,p_b,p_c,fsw,fsw_visual,fsw_ref,solve_us,nodes\n";
    const size_t n = fcs_trace_length(trace);
    fcs_trace_row r;
    for (size_t i = 0; i < n; ++i) {
        if (fcs_trace_get_row(trace, i, &r) != FCS_OK)
            throw std::runtime_error(fcs_last_error());
        out << fmt9(r.t) << ',' << fmt9(r.i_ref_a) << ',' << fmt9(r.i_ref_b) << ','
            << fmt9(r.i_ref_c) << ',' << fmt9(r.i_a) << ',' << fmt9(r.i_b) << ','
            << fmt9(r.i_c) << ',' << r.u_a << ',' << r.u_b << ',' << r.u_c << ','
            << r.p_a << ',' << r.p_b << ',' << r.p_c << ',' << fmt9(r.fsw) << ','
            << fmt9(r.fsw_visual) << ',' << fmt9(r.fsw_ref) << ',' << fmt9(r.solve_us)
            << ',' << r.nodes << '\n';
    }
}

unsigned thread_cap(size_t n_tasks) {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FCS_SPHERE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) cap = unsigned(v);
        } catch (...) {
            std::cerr << "warning: ignoring malformed FCS_SPHERE_THREADS='" << env << "'\n";
        }
    }
    return std::min<unsigned>(cap, unsigned(n_tasks ? n_tasks : 1));
}

int cmd_simulate(const std::string& config_path, const std::string& scenario_sel,
                 const std::string& controller_sel, bool no_bound,
                 const std::string& out_dir_flag, std::optional<long long> seed) {
    fcs_config* cfg = fcs_config_create();
    if (!cfg) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }
    struct ConfigGuard {
        fcs_config* c;
        ~ConfigGuard() { fcs_config_destroy(c); }
    } guard{cfg};

    if (!config_path.empty() && fcs_config_load(cfg, config_path.c_str()) != FCS_OK) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }

    auto config_value = [&](const char* key) {
        char buf[256];
        if (fcs_config_get(cfg, key, buf, sizeof buf) != FCS_OK)
            throw std::runtime_error(fcs_last_error());
        return std::string(buf);
    };

    const std::string scenario = scenario_sel.empty() ? config_value("scenario.select")
                                                      : scenario_sel;
    const std::string controller = controller_sel.empty() ? config_value("controller.select")
                                                          : controller_sel;
    const std::string out_dir = out_dir_flag.empty() ? config_value("output.dir") : out_dir_flag;
    if (seed && fcs_config_set(cfg, "output.seed", std::to_string(*seed).c_str()) != FCS_OK) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }

    std::vector<std::string> scenarios;
    if (scenario == "all") scenarios = {"steady", "ramp", "step", "fswstep"};
    else scenarios = {scenario};
    std::vector<std::string> controllers;
    if (controller == "both") controllers = {"ft", "fl"};
    else controllers = {controller};

    std::vector<RunSpec> specs;
    for (const std::string& sc : scenarios) {
        const fcs_scenario_id id = scenario_id_of(sc);
        for (const std::string& ct : controllers) {
            specs.push_back({sc, id, ct, true});
            if (ct == "fl" && no_bound) specs.push_back({sc, id, ct, false});
        }
    }

    std::filesystem::create_directories(out_dir);

    std::vector<RunOutcome> outcomes(specs.size());
    std::atomic<size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            RunOutcome& oc = outcomes[i];
            oc.spec = specs[i];
            const std::string label = run_label(oc.spec);
            {
                std::lock_guard lk(log_mutex);
                std::cout << "running " << label << " ...\n" << std::flush;
            }
            fcs_trace* trace = nullptr;
            const fcs_controller ct = oc.spec.controller == "ft" ? FCS_CONTROLLER_FT
                                                                 : FCS_CONTROLLER_FL;
            if (fcs_simulate(cfg, oc.spec.scenario_id, ct, oc.spec.use_bound ? 1 : 0,
                             &trace) != FCS_OK) {
                oc.error = fcs_last_error();
                continue;
            }
            try {
                oc.csv_path = out_dir + "/" + label + ".csv";
                write_trace_csv(trace, oc.csv_path);
                if (fcs_trace_metrics(trace, &oc.metrics) != FCS_OK)
                    throw std::runtime_error(fcs_last_error());
                oc.ok = true;
            } catch (const std::exception& e) {
                oc.error = e.what();
            }
            fcs_trace_destroy(trace);
            {
                std::lock_guard lk(log_mutex);
                if (oc.ok)
                    std::cout << "finished " << label << " (" << oc.csv_path << ")\n"
                              << std::flush;
            }
        }
    };

    const unsigned n_threads = thread_cap(specs.size());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    bool any_failed = false;
    for (const RunOutcome& oc : outcomes)
        if (!oc.ok) {
            std::cerr << "error: run " << run_label(oc.spec) << " failed: " << oc.error << "\n";
            any_failed = true;
        }
    if (any_failed) return 1;

    // Human-readable tables, one per scenario, plus a key=value block.
    std::ostringstream txt;
    std::ostringstream kv;
    txt << "fcs-sphere simulation summary\n";
    txt << "config: " << (config_path.empty() ? "(defaults)" : config_path) << "\n\n";
    for (const std::string& sc : scenarios) {
        const RunOutcome* first = nullptr;
        for (const RunOutcome& oc : outcomes)
            if (oc.spec.scenario == sc) { first = &oc; break; }
        if (!first) continue;
        txt << "scenario " << sc << "  (window t0=" << fmt9(first->metrics.window_t0)
            << " s, T=" << fmt9(first->metrics.window_T) << " s)\n";
        txt << "  controller  bound  TDD[%]     e_I2[%]      fsw_avg[Hz]  "
               "solve_max[ms]  p70[ms]   p95[ms]   nodes_p95\n";
        const fcs_metrics* bound_m = nullptr;
        const fcs_metrics* nobound_m = nullptr;
        for (const RunOutcome& oc : outcomes) {
            if (oc.spec.scenario != sc) continue;
            const auto& m = oc.metrics;
            char line[256];
            std::snprintf(line, sizeof line,
                          "  %-10s  %-5s  %-9.4g  %-11.5g  %-11.4f  %-13.4g  %-8.4g  %-8.4g  %llu\n",
                          oc.spec.controller.c_str(),
                          oc.spec.controller == "ft" ? "-" : (oc.spec.use_bound ? "yes" : "no"),
                          m.tdd_percent, m.tracking_error_percent, m.fsw_avg_hz,
                          m.solve_us_max / 1000.0, m.solve_us_p70 / 1000.0,
                          m.solve_us_p95 / 1000.0,
                          (unsigned long long)m.nodes_p95);
            txt << line;
            if (oc.spec.controller == "fl" && oc.spec.use_bound) bound_m = &oc.metrics;
            if (oc.spec.controller == "fl" && !oc.spec.use_bound) nobound_m = &oc.metrics;

            const std::string prefix = sc + "." + oc.spec.controller +
                                       (oc.spec.controller == "fl" && !oc.spec.use_bound
                                            ? "_nobound"
                                            : "");
            kv << prefix << ".tdd_percent=" << fmt9(m.tdd_percent) << "\n";
            kv << prefix << ".e_i2_percent=" << fmt9(m.tracking_error_percent) << "\n";
            kv << prefix << ".fsw_avg_hz=" << fmt9(m.fsw_avg_hz) << "\n";
            kv << prefix << ".solve_us_total=" << fmt9(m.solve_us_total) << "\n";
            kv << prefix << ".solve_us_max=" << fmt9(m.solve_us_max) << "\n";
            kv << prefix << ".solve_us_p70=" << fmt9(m.solve_us_p70) << "\n";
            kv << prefix << ".solve_us_p95=" << fmt9(m.solve_us_p95) << "\n";
            kv << prefix << ".nodes_max=" << m.nodes_max << "\n";
            kv << prefix << ".nodes_p70=" << m.nodes_p70 << "\n";
            kv << prefix << ".nodes_p95=" << m.nodes_p95 << "\n";
        }
        if (bound_m && nobound_m && bound_m->nodes_p95 > 0) {
            const double ratio = double(nobound_m->nodes_p95) / double(bound_m->nodes_p95);
            txt << "  fl node-count p95 ratio (no-bound / bound): " << fmt9(ratio) << "\n";
            kv << sc << ".fl.nodes_p95_ratio_nobound_over_bound=" << fmt9(ratio) << "\n";
        }
        txt << "\n";
    }
    txt << "key=value\n---------\n" << kv.str();

    {
        std::ofstream f(out_dir + "/summary.txt");
        if (!f) {
            std::cerr << "error: cannot write " << out_dir << "/summary.txt\n";
            return 1;
        }
        f << txt.str();
    }
    {
        std::ofstream f(out_dir + "/summary.csv");
        if (!f) {
            std::cerr << "error: cannot write " << out_dir << "/summary.csv\n";
            return 1;
        }
        f << "scenario,controller,bound,tdd_percent,e_i2_percent,fsw_avg_hz,"
             "solve_us_total,solve_us_max,solve_us_p70,solve_us_p95,"
             "nodes_total,nodes_max,nodes_p70,nodes_p95\n";
        for (const RunOutcome& oc : outcomes) {
            const auto& m = oc.metrics;
            f << oc.spec.scenario << ',' << oc.spec.controller << ','
              << (oc.spec.use_bound ? 1 : 0) << ',' << fmt9(m.tdd_percent) << ','
              << fmt9(m.tracking_error_percent) << ',' << fmt9(m.fsw_avg_hz) << ','
              << fmt9(m.solve_us_total) << ',' << fmt9(m.solve_us_max) << ','
              << fmt9(m.solve_us_p70) << ',' << fmt9(m.solve_us_p95) << ','
              << m.nodes_total << ',' << m.nodes_max << ',' << m.nodes_p70 << ','
              << m.nodes_p95 << '\n';
        }
    }

    std::cout << "\n" << txt.str();
    std::cout << "wrote " << out_dir << "/summary.txt and " << out_dir << "/summary.csv\n";
    return 0;
}

int cmd_verify(const std::string& config_path, std::optional<long long> seed_flag,
               const std::string& out_dir, bool perturb_hessian) {
    fcs_config* cfg = fcs_config_create();
    if (!cfg) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }
    struct ConfigGuard {
        fcs_config* c;
        ~ConfigGuard() { fcs_config_destroy(c); }
    } guard{cfg};

    if (!config_path.empty() && fcs_config_load(cfg, config_path.c_str()) != FCS_OK) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }
    uint64_t seed = 1;
    if (seed_flag) {
        seed = uint64_t(*seed_flag);
    } else {
        char buf[64];
        if (fcs_config_get(cfg, "output.seed", buf, sizeof buf) == FCS_OK)
            seed = std::strtoull(buf, nullptr, 10);
    }

    std::string report(16384, '\0');
    int failures = 0;
    const unsigned flags = perturb_hessian ? FCS_VERIFY_PERTURB_HESSIAN : 0u;
    if (fcs_verify(cfg, seed, flags, report.data(), report.size(), &failures) != FCS_OK) {
        std::cerr << "error: " << fcs_last_error() << "\n";
        return 1;
    }
    report.resize(std::strlen(report.c_str()));
    std::cout << report;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir + "/verify_report.txt");
        f << report;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-control-set MPC sphere-decoder benchmark"};
    app.require_subcommand(1);

    std::string config_path, scenario, controller, out_dir;
    std::optional<long long> seed;
    bool no_bound = false;
    bool perturb = false;

    CLI::App* sim = app.add_subcommand("simulate", "run closed-loop scenarios");
    sim->add_option("--config", config_path, "config file (sectioned key=value)")
        ->check(CLI::ExistingFile);
    sim->add_option("--scenario", scenario, "steady|ramp|step|fswstep|all")
        ->check(CLI::IsMember({"steady", "ramp", "step", "fswstep", "all"}));
    sim->add_option("--controller", controller, "ft|fl|both")
        ->check(CLI::IsMember({"ft", "fl", "both"}));
    sim->add_flag("--no-bound", no_bound,
                  "additionally run FL without the pruning bound for comparison");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--seed", seed, "seed recorded with the run");

    CLI::App* ver = app.add_subcommand("verify", "run the property verification suites");
    ver->add_option("--config", config_path, "config file (sectioned key=value)")
        ->check(CLI::ExistingFile);
    ver->add_option("--seed", seed, "rng seed for the suites");
    ver->add_option("--out", out_dir, "also write verify_report.txt here");
    ver->add_flag("--perturb-hessian", perturb,
                  "test hook: corrupt the Hessian (factorization suite must fail)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, scenario, controller, no_bound, out_dir, seed);
        return cmd_verify(config_path, seed, out_dir, perturb);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
