// Run configuration: the key = value file schema, flag overrides, and the
// validated bundle every CLI subcommand consumes.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "liability/equilibrium.hpp"
#include "liability/model.hpp"
#include "liability/scenarios.hpp"

namespace liability {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    ModelParams model;
    SolverConfig solver;
    Market market;                     // scenario.p / scenario.eta
    KPolicy policy;                    // scenario.k: number or "strategic"
    std::vector<double> p_grid;        // scenario.p_grid, default 0.01:0.99:0.01
    std::vector<double> k_grid;        // scenario.k_grid, default 0.05:3:0.05
    HeterogeneityConfig mc;            // scenario.mc_*
    int p_scan_resolution = 200;       // scenario.p_scan_resolution
    bool pure_av_baseline = false;     // append p=1 comparison columns to sweeps
    std::string sensitivity_parameter = "alpha";   // scenario.parameter
    std::vector<double> sensitivity_values;        // scenario.values
    int oracle_resolution = 1000;      // scenario.oracle_resolution
    std::string oracle_game = "AH";    // scenario.oracle_game
    std::string out_dir = ".";
};

// Parses "start:stop:step" into an inclusive grid.
std::vector<double> parse_grid(const std::string& spec);

// Reads a key = value file ('#' comments, blank lines ignored). Later keys
// override earlier ones; first error wins for malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Builds a validated RunConfig from file values plus repeatable KEY=VALUE
// overrides (overrides win). Unknown keys and every violated invariant are
// reported together in one ConfigError.
RunConfig parse_config(const std::map<std::string, std::string>& file_values,
                       const std::vector<std::string>& overrides);

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides);

// The resolved configuration as stable key = value lines, exactly what a
// config file reproducing this run would contain.
std::vector<std::string> describe(const RunConfig& config);

}  // namespace liability
