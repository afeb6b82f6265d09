#include "fcs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fcs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (...) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    RunParams& p = cfg.params;
    if (key == "system.R") p.sys.R = parse_double(key, value);
    else if (key == "system.L") p.sys.L = parse_double(key, value);
    else if (key == "system.V_g") p.sys.V_g = parse_double(key, value);
    else if (key == "system.V_dc") p.sys.V_dc = parse_double(key, value);
    else if (key == "system.f1") p.sys.f1 = parse_double(key, value);
    else if (key == "system.T_s") {
        p.sys.T_s = parse_double(key, value);
        p.filter.T_s = p.sys.T_s;
    }
    else if (key == "controller.N_p") p.N_p = parse_int(key, value);
    else if (key == "controller.a1") p.filter.a1 = parse_double(key, value);
    else if (key == "controller.a2") p.filter.a2 = parse_double(key, value);
    else if (key == "controller.a1_visual") p.a1_visual = parse_double(key, value);
    else if (key == "controller.a2_visual") p.a2_visual = parse_double(key, value);
    else if (key == "controller.lambda_u") p.weights.lambda_u = parse_double(key, value);
    else if (key == "controller.lambda_sw") p.weights.lambda_sw = parse_double(key, value);
    else if (key == "controller.f_sw_ref") p.f_sw_ref = parse_double(key, value);
    else if (key == "controller.select") {
        if (value != "ft" && value != "fl" && value != "both")
            throw std::invalid_argument("config: controller.select must be ft|fl|both");
        cfg.controller = value;
    }
    else if (key == "controller.bound") cfg.use_bound = parse_bool(key, value);
    else if (key == "scenario.select") {
        if (value != "steady" && value != "ramp" && value != "step" &&
            value != "fswstep" && value != "all")
            throw std::invalid_argument("config: scenario.select must be steady|ramp|step|fswstep|all");
        cfg.scenario = value;
    }
    else if (key == "scenario.T_sim") p.T_sim = parse_double(key, value);
    else if (key == "scenario.ramp_P0") p.ramp_P0 = parse_double(key, value);
    else if (key == "scenario.ramp_P1") p.ramp_P1 = parse_double(key, value);
    else if (key == "scenario.step_P0") p.step_P0 = parse_double(key, value);
    else if (key == "scenario.step_P1") p.step_P1 = parse_double(key, value);
    else if (key == "scenario.fswstep_f0") p.fswstep_f0 = parse_double(key, value);
    else if (key == "scenario.fswstep_f1") p.fswstep_f1 = parse_double(key, value);
    else if (key == "output.dir") cfg.out_dir = value;
    else if (key == "output.seed") cfg.seed = std::uint64_t(std::max(0, parse_int(key, value)));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string get_config_kv(const RunConfig& cfg, const std::string& key) {
    const RunParams& p = cfg.params;
    std::ostringstream os;
    if (key == "system.R") os << format_double(p.sys.R);
    else if (key == "system.L") os << format_double(p.sys.L);
    else if (key == "system.V_g") os << format_double(p.sys.V_g);
    else if (key == "system.V_dc") os << format_double(p.sys.V_dc);
    else if (key == "system.f1") os << format_double(p.sys.f1);
    else if (key == "system.T_s") os << format_double(p.sys.T_s);
    else if (key == "controller.N_p") os << p.N_p;
    else if (key == "controller.a1") os << format_double(p.filter.a1);
    else if (key == "controller.a2") os << format_double(p.filter.a2);
    else if (key == "controller.a1_visual") os << format_double(p.a1_visual);
    else if (key == "controller.a2_visual") os << format_double(p.a2_visual);
    else if (key == "controller.lambda_u") os << format_double(p.weights.lambda_u);
    else if (key == "controller.lambda_sw") os << format_double(p.weights.lambda_sw);
    else if (key == "controller.f_sw_ref") os << format_double(p.f_sw_ref);
    else if (key == "controller.select") os << cfg.controller;
    else if (key == "controller.bound") os << (cfg.use_bound ? "true" : "false");
    else if (key == "scenario.select") os << cfg.scenario;
    else if (key == "scenario.T_sim") os << format_double(p.T_sim);
    else if (key == "scenario.ramp_P0") os << format_double(p.ramp_P0);
    else if (key == "scenario.ramp_P1") os << format_double(p.ramp_P1);
    else if (key == "scenario.step_P0") os << format_double(p.step_P0);
    else if (key == "scenario.step_P1") os << format_double(p.step_P1);
    else if (key == "scenario.fswstep_f0") os << format_double(p.fswstep_f0);
    else if (key == "scenario.fswstep_f1") os << format_double(p.fswstep_f1);
    else if (key == "output.dir") os << cfg.out_dir;
    else if (key == "output.seed") os << cfg.seed;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "controller" && section != "scenario" &&
                section != "output")
                throw std::invalid_argument("config: unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config: key outside any section at line " +
                                        std::to_string(lineno));
        apply_config_kv(cfg, section + "." + key, value);
    }
    cfg.params.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fcs
