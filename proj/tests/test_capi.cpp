#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcssphere.h"

#include <cmath>
#include <cstring>
#include <string>

namespace {

// Coarse timing keeps the closed-loop C API checks quick.
fcs_config* fast_config() {
    fcs_config* cfg = fcs_config_create();
    REQUIRE(cfg != nullptr);
    REQUIRE(fcs_config_set(cfg, "system.T_s", "1e-3") == FCS_OK);
    REQUIRE(fcs_config_set(cfg, "scenario.T_sim", "1e-4") == FCS_OK);
    REQUIRE(fcs_config_set(cfg, "controller.N_p", "2") == FCS_OK);
    return cfg;
}

}  // namespace

TEST_CASE("version and error state") {
    CHECK(std::string(fcs_version()) == "1.0.0");
    CHECK(fcs_last_error() != nullptr);
}

TEST_CASE("config set, get, and rejection of bad keys") {
    fcs_config* cfg = fcs_config_create();
    REQUIRE(cfg != nullptr);

    char buf[64];
    CHECK(fcs_config_get(cfg, "system.L", buf, sizeof buf) == FCS_OK);
    CHECK(std::string(buf) == "0.266");

    CHECK(fcs_config_set(cfg, "system.L", "0.3") == FCS_OK);
    CHECK(fcs_config_get(cfg, "system.L", buf, sizeof buf) == FCS_OK);
    CHECK(std::string(buf) == "0.3");

    CHECK(fcs_config_set(cfg, "system.bogus", "1") == FCS_ERR_BAD_CONFIG);
    CHECK(std::strlen(fcs_last_error()) > 0);
    CHECK(fcs_config_set(nullptr, "system.L", "1") == FCS_ERR_INVALID_ARGUMENT);

    char tiny[2];
    CHECK(fcs_config_get(cfg, "system.L", tiny, sizeof tiny) == FCS_ERR_OUT_OF_RANGE);
    CHECK(tiny[1] == '\0');

    fcs_config_destroy(cfg);
}

TEST_CASE("closed-loop run through the shared library") {
    fcs_config* cfg = fast_config();

    fcs_trace* trace = nullptr;
    REQUIRE(fcs_simulate(cfg, FCS_SCENARIO_STEADY, FCS_CONTROLLER_FL, 1, &trace) == FCS_OK);
    REQUIRE(trace != nullptr);

    const size_t n = fcs_trace_length(trace);
    CHECK(n == 1500);  // 1.5 s at T_s = 1 ms

    fcs_trace_row row;
    REQUIRE(fcs_trace_get_row(trace, 0, &row) == FCS_OK);
    CHECK(row.t == 0.0);
    CHECK(row.fsw_ref == 250.0);
    CHECK(std::abs(row.i_ref_a + row.i_ref_b + row.i_ref_c) < 1e-9);
    REQUIRE(fcs_trace_get_row(trace, n - 1, &row) == FCS_OK);
    CHECK(row.t == doctest::Approx((double(n) - 1.0) * 1e-3));
    CHECK(fcs_trace_get_row(trace, n, &row) == FCS_ERR_OUT_OF_RANGE);

    fcs_metrics m;
    REQUIRE(fcs_trace_metrics(trace, &m) == FCS_OK);
    CHECK(m.window_t0 == 0.5);
    CHECK(m.window_T == 1.0);
    CHECK(m.tdd_percent > 0.0);
    CHECK(m.fsw_avg_hz > 0.0);
    CHECK(m.nodes_p95 >= m.nodes_p70);
    CHECK(m.solve_us_max >= m.solve_us_p95);

    // explicit window variant
    fcs_metrics mw;
    REQUIRE(fcs_trace_metrics_window(trace, 0.5, 0.4, &mw) == FCS_OK);
    CHECK(mw.window_T == 0.4);

    // a window that is not an integer number of fundamental periods fails
    CHECK(fcs_trace_metrics_window(trace, 0.5, 0.4101, &mw) == FCS_ERR_INVALID_ARGUMENT);

    fcs_trace_destroy(trace);
    fcs_config_destroy(cfg);
}

TEST_CASE("invalid simulate arguments") {
    fcs_config* cfg = fast_config();
    fcs_trace* trace = nullptr;
    CHECK(fcs_simulate(cfg, fcs_scenario_id(99), FCS_CONTROLLER_FT, 1, &trace) ==
          FCS_ERR_INVALID_ARGUMENT);
    CHECK(fcs_simulate(cfg, FCS_SCENARIO_STEADY, fcs_controller(7), 1, &trace) ==
          FCS_ERR_INVALID_ARGUMENT);
    CHECK(fcs_simulate(nullptr, FCS_SCENARIO_STEADY, FCS_CONTROLLER_FT, 1, &trace) ==
          FCS_ERR_INVALID_ARGUMENT);
    // inconsistent timing surfaces as an invalid-argument error
    REQUIRE(fcs_config_set(cfg, "scenario.T_sim", "3e-4") == FCS_OK);
    CHECK(fcs_simulate(cfg, FCS_SCENARIO_STEADY, FCS_CONTROLLER_FT, 1, &trace) ==
          FCS_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(fcs_last_error()) > 0);
    fcs_config_destroy(cfg);
}

TEST_CASE("verification suites pass and the perturbation hook trips them") {
    fcs_config* cfg = fcs_config_create();
    REQUIRE(cfg != nullptr);

    std::string report(8192, '\0');
    int failures = -1;
    REQUIRE(fcs_verify(cfg, 1, 0, report.data(), report.size(), &failures) == FCS_OK);
    CHECK(failures == 0);
    CHECK(report.find("[PASS] oracle-equivalence") != std::string::npos);
    CHECK(report.find("[PASS] prop1-admissibility") != std::string::npos);
    CHECK(report.find("[PASS] factorization-residual") != std::string::npos);
    CHECK(report.find("[PASS] filter-dc-gain") != std::string::npos);
    CHECK(report.find("seed 1") != std::string::npos);

    // identical seed, identical report
    std::string again(8192, '\0');
    REQUIRE(fcs_verify(cfg, 1, 0, again.data(), again.size(), &failures) == FCS_OK);
    CHECK(std::strcmp(report.c_str(), again.c_str()) == 0);

    // negative control: a corrupted Hessian must fail the residual suite
    REQUIRE(fcs_verify(cfg, 1, FCS_VERIFY_PERTURB_HESSIAN, report.data(), report.size(),
                       &failures) == FCS_OK);
    CHECK(failures == 1);
    CHECK(report.find("[FAIL] factorization-residual") != std::string::npos);

    fcs_config_destroy(cfg);
}
