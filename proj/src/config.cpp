#include "liability/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace liability {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long x = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

// full precision so a manifest replays to the identical configuration
std::string format_value(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model.alpha", "model.beta", "model.a", "model.h", "model.M", "model.s",
        "model.t", "model.w_h", "model.w_a_sen", "model.w_a_loss", "model.w_l",
        "model.c_h_max", "model.c_a_max", "model.k_max",
        "solver.care_tolerance", "solver.grid_resolution", "solver.max_iterations",
        "solver.fd_step",
        "scenario.p", "scenario.k", "scenario.eta", "scenario.seed",
        "scenario.p_grid", "scenario.k_grid", "scenario.parameter", "scenario.values",
        "scenario.mc_samples", "scenario.mc_mean", "scenario.mc_stddev",
        "scenario.mc_lower", "scenario.mc_upper", "scenario.p_scan_resolution",
        "scenario.pure_av_baseline", "scenario.oracle_resolution",
        "scenario.oracle_game",
    };
    return keys;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    double start, stop, step;
    char colon1, colon2;
    std::stringstream ss(spec);
    if (!(ss >> start >> colon1 >> stop >> colon2 >> step) || colon1 != ':' ||
        colon2 != ':' || !(ss >> std::ws).eof())
        throw ConfigError("grid '" + spec + "' is not start:stop:step");
    if (!(step > 0) || stop < start)
        throw ConfigError("grid '" + spec + "' must have step > 0 and stop >= start");
    std::vector<double> grid;
    int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) grid.push_back(start + i * step);
    return grid;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key or value");
        values[key] = value;
    }
    return values;
}

RunConfig parse_config(const std::map<std::string, std::string>& file_values,
                       const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> values = file_values;
    for (const std::string& item : overrides) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + item + "' is not KEY=VALUE");
        values[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }

    std::vector<std::string> unknown;
    for (const auto& [key, value] : values)
        if (known_keys().count(key) == 0) unknown.push_back(key);
    if (!unknown.empty()) {
        std::string msg = "unknown configuration keys:";
        for (const auto& key : unknown) msg += " " + key;
        throw ConfigError(msg);
    }

    RunConfig config;
    auto has = [&](const char* key) { return values.count(key) > 0; };
    auto num = [&](const char* key) { return parse_number(key, values.at(key)); };
    auto integer = [&](const char* key) { return parse_integer(key, values.at(key)); };

    if (has("model.alpha")) config.model.alpha = num("model.alpha");
    if (has("model.beta")) config.model.beta = num("model.beta");
    if (has("model.a")) config.model.a = num("model.a");
    if (has("model.h")) config.model.h = num("model.h");
    if (has("model.M")) config.model.M = num("model.M");
    if (has("model.s")) config.model.s = num("model.s");
    if (has("model.t")) config.model.t = num("model.t");
    if (has("model.w_h")) config.model.w_h = num("model.w_h");
    if (has("model.w_a_sen")) config.model.w_a_sen = num("model.w_a_sen");
    if (has("model.w_a_loss")) config.model.w_a_loss = num("model.w_a_loss");
    if (has("model.w_l")) config.model.w_l = num("model.w_l");
    // bounds follow the cost poles unless pinned explicitly
    if (config.model.alpha > 0 && config.model.beta > 0) config.model.derive_bounds();
    if (has("model.c_h_max")) config.model.c_h_max = num("model.c_h_max");
    if (has("model.c_a_max")) config.model.c_a_max = num("model.c_a_max");
    if (has("model.k_max")) config.model.k_max = num("model.k_max");

    if (has("solver.care_tolerance"))
        config.solver.care_tolerance = num("solver.care_tolerance");
    if (has("solver.grid_resolution"))
        config.solver.grid_resolution = static_cast<int>(integer("solver.grid_resolution"));
    if (has("solver.max_iterations"))
        config.solver.max_iterations = static_cast<int>(integer("solver.max_iterations"));
    if (has("solver.fd_step")) config.solver.fd_step = num("solver.fd_step");

    if (has("scenario.p")) config.market.p = num("scenario.p");
    if (has("scenario.eta")) config.market.eta = num("scenario.eta");
    if (has("scenario.k")) {
        const std::string& v = values.at("scenario.k");
        if (v == "strategic")
            config.policy = KPolicy::lawmaker();
        else
            config.policy = KPolicy::fixed(parse_number("scenario.k", v));
    }
    if (has("scenario.p_grid")) config.p_grid = parse_grid(values.at("scenario.p_grid"));
    if (has("scenario.k_grid")) config.k_grid = parse_grid(values.at("scenario.k_grid"));
    if (has("scenario.parameter"))
        config.sensitivity_parameter = values.at("scenario.parameter");
    if (has("scenario.values"))
        config.sensitivity_values = parse_list("scenario.values", values.at("scenario.values"));
    if (has("scenario.seed"))
        config.mc.seed = static_cast<std::uint64_t>(integer("scenario.seed"));
    if (has("scenario.mc_samples"))
        config.mc.samples = static_cast<int>(integer("scenario.mc_samples"));
    if (has("scenario.mc_mean")) config.mc.mean = num("scenario.mc_mean");
    if (has("scenario.mc_stddev")) config.mc.stddev = num("scenario.mc_stddev");
    if (has("scenario.mc_lower")) config.mc.lower = num("scenario.mc_lower");
    if (has("scenario.mc_upper")) config.mc.upper = num("scenario.mc_upper");
    if (has("scenario.p_scan_resolution"))
        config.p_scan_resolution = static_cast<int>(integer("scenario.p_scan_resolution"));
    if (has("scenario.pure_av_baseline"))
        config.pure_av_baseline =
            parse_bool("scenario.pure_av_baseline", values.at("scenario.pure_av_baseline"));
    if (has("scenario.oracle_resolution"))
        config.oracle_resolution =
            static_cast<int>(integer("scenario.oracle_resolution"));
    if (has("scenario.oracle_game")) config.oracle_game = values.at("scenario.oracle_game");

    if (config.p_grid.empty())
        config.p_grid = parse_grid("0.01:0.99:0.01");
    if (config.k_grid.empty())
        config.k_grid = parse_grid("0.05:3.0:0.05");

    std::vector<std::string> errors;
    for (const auto& msg : validate(config.model)) errors.push_back("model: " + msg);
    for (const auto& msg : validate(config.solver)) errors.push_back("solver: " + msg);
    for (const auto& msg : validate(config.mc)) errors.push_back("scenario: " + msg);
    if (!(config.market.p >= 0 && config.market.p <= 1))
        errors.push_back("scenario.p must be in [0,1], got " + format_value(config.market.p));
    if (!(config.market.eta >= 0))
        errors.push_back("scenario.eta must be >= 0, got " + format_value(config.market.eta));
    if (!config.policy.strategic && !(config.policy.k > 0 && config.policy.k <= config.model.k_max))
        errors.push_back("scenario.k must be in (0, k_max] or 'strategic', got " +
                         format_value(config.policy.k));
    for (double p : config.p_grid)
        if (!(p >= 0 && p <= 1)) {
            errors.push_back("scenario.p_grid contains " + format_value(p) +
                             " outside [0,1]");
            break;
        }
    for (double k : config.k_grid)
        if (!(k > 0 && k <= config.model.k_max)) {
            errors.push_back("scenario.k_grid contains " + format_value(k) +
                             " outside (0, k_max]");
            break;
        }
    if (config.p_scan_resolution < 2)
        errors.push_back("scenario.p_scan_resolution must be >= 2");
    if (config.oracle_resolution < 1)
        errors.push_back("scenario.oracle_resolution must be >= 1");
    static const std::set<std::string> games = {"HH", "AH", "AV", "EXCLUSIVE"};
    if (games.count(config.oracle_game) == 0)
        errors.push_back("scenario.oracle_game must be one of HH, AH, AV, EXCLUSIVE");
    static const std::set<std::string> parameters = {"alpha", "a", "h", "w_a_sen",
                                                     "w_a_loss"};
    if (parameters.count(config.sensitivity_parameter) == 0)
        errors.push_back("scenario.parameter must be one of alpha, a, h, w_a_sen, w_a_loss");

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return config;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> values;
    if (!path.empty()) values = read_config_file(path);
    return parse_config(values, overrides);
}

std::vector<std::string> describe(const RunConfig& config) {
    std::vector<std::string> lines;
    auto kv = [&](const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    };
    kv("model.alpha", format_value(config.model.alpha));
    kv("model.beta", format_value(config.model.beta));
    kv("model.a", format_value(config.model.a));
    kv("model.h", format_value(config.model.h));
    kv("model.M", format_value(config.model.M));
    kv("model.s", format_value(config.model.s));
    kv("model.t", format_value(config.model.t));
    kv("model.w_h", format_value(config.model.w_h));
    kv("model.w_a_sen", format_value(config.model.w_a_sen));
    kv("model.w_a_loss", format_value(config.model.w_a_loss));
    kv("model.w_l", format_value(config.model.w_l));
    kv("model.c_h_max", format_value(config.model.c_h_max));
    kv("model.c_a_max", format_value(config.model.c_a_max));
    kv("model.k_max", format_value(config.model.k_max));
    kv("solver.care_tolerance", format_value(config.solver.care_tolerance));
    kv("solver.grid_resolution", std::to_string(config.solver.grid_resolution));
    kv("solver.max_iterations", std::to_string(config.solver.max_iterations));
    kv("solver.fd_step", format_value(config.solver.fd_step));
    kv("scenario.p", format_value(config.market.p));
    kv("scenario.eta", format_value(config.market.eta));
    kv("scenario.k", config.policy.strategic ? "strategic" : format_value(config.policy.k));
    {
        std::string grid;
        for (double p : config.p_grid) grid += (grid.empty() ? "" : ",") + format_value(p);
        kv("scenario.p_grid", grid);
        grid.clear();
        for (double k : config.k_grid) grid += (grid.empty() ? "" : ",") + format_value(k);
        kv("scenario.k_grid", grid);
    }
    kv("scenario.parameter", config.sensitivity_parameter);
    {
        std::string vals;
        for (double v : config.sensitivity_values)
            vals += (vals.empty() ? "" : ",") + format_value(v);
        kv("scenario.values", vals.empty() ? "-" : vals);
    }
    kv("scenario.seed", std::to_string(config.mc.seed));
    kv("scenario.mc_samples", std::to_string(config.mc.samples));
    kv("scenario.mc_mean", format_value(config.mc.mean));
    kv("scenario.mc_stddev", format_value(config.mc.stddev));
    kv("scenario.mc_lower", format_value(config.mc.lower));
    kv("scenario.mc_upper", format_value(config.mc.upper));
    kv("scenario.p_scan_resolution", std::to_string(config.p_scan_resolution));
    kv("scenario.pure_av_baseline", config.pure_av_baseline ? "true" : "false");
    kv("scenario.oracle_resolution", std::to_string(config.oracle_resolution));
    kv("scenario.oracle_game", config.oracle_game);
    return lines;
}

}  // namespace liability
