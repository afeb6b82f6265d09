#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fcs/config.hpp"

using namespace fcs;

TEST_CASE("defaults reproduce the baseline parameter set") {
    const RunConfig cfg;
    CHECK(cfg.params.sys.L == 0.266);
    CHECK(cfg.params.sys.R == 0.015);
    CHECK(cfg.params.sys.V_g == 1.0);
    CHECK(cfg.params.sys.V_dc == 1.9);
    CHECK(cfg.params.sys.f1 == 50.0);
    CHECK(cfg.params.sys.T_s == 1e-4);
    CHECK(cfg.params.N_p == 5);
    CHECK(cfg.params.filter.a1 == 0.99);
    CHECK(cfg.params.filter.a2 == 0.99);
    CHECK(cfg.params.a1_visual == 0.995);
    CHECK(cfg.params.weights.lambda_u == 13e-3);
    CHECK(cfg.params.weights.lambda_sw == 60.0);
    CHECK(cfg.params.f_sw_ref == 250.0);
    CHECK(cfg.params.T_sim == 1e-6);
    CHECK(cfg.controller == "both");
    CHECK(cfg.scenario == "steady");
    CHECK(cfg.use_bound);
}

TEST_CASE("an empty config file keeps every default") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.params.sys.L == 0.266);
    CHECK(cfg.params.N_p == 5);
}

TEST_CASE("sectioned key=value parsing") {
    const std::string text = R"(
# comment
[system]
L = 0.3
R = 0.02   ; trailing comment
T_s = 2e-4

[controller]
N_p = 3
lambda_sw = 45
select = fl

[scenario]
select = ramp
T_sim = 2e-6
ramp_P0 = 0.2

[output]
dir = results
seed = 7
)";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.params.sys.L == 0.3);
    CHECK(cfg.params.sys.R == 0.02);
    CHECK(cfg.params.sys.T_s == 2e-4);
    CHECK(cfg.params.filter.T_s == 2e-4);  // filter rides the control interval
    CHECK(cfg.params.N_p == 3);
    CHECK(cfg.params.weights.lambda_sw == 45.0);
    CHECK(cfg.controller == "fl");
    CHECK(cfg.scenario == "ramp");
    CHECK(cfg.params.T_sim == 2e-6);
    CHECK(cfg.params.ramp_P0 == 0.2);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.seed == 7);
}

TEST_CASE("errors carry diagnostics") {
    CHECK_THROWS_AS(parse_config("[system]\nbogus = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[nope]\nL = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("L = 1\n"), std::invalid_argument);  // outside section
    CHECK_THROWS_AS(parse_config("[system]\nL == 0.3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[system]\nL\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[system]\nL = -1\n"), std::invalid_argument);  // invalid value
    CHECK_THROWS_AS(parse_config("[controller]\nselect = maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), std::runtime_error);
}

TEST_CASE("round trip through get") {
    RunConfig cfg;
    apply_config_kv(cfg, "system.L", "0.31");
    CHECK(get_config_kv(cfg, "system.L") == "0.31");
    apply_config_kv(cfg, "controller.bound", "false");
    CHECK(get_config_kv(cfg, "controller.bound") == "false");
    CHECK_THROWS_AS(get_config_kv(cfg, "system.nope"), std::invalid_argument);
}
