// Scenario CLI for the AV/HV liability game. Each subcommand writes one or
// more CSV tables plus a run manifest into the output directory; progress
// and errors go to stderr, data to files and stdout only.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "liability/config.hpp"
#include "liability/csv.hpp"
#include "liability/equilibrium.hpp"
#include "liability/hierarchy.hpp"
#include "liability/model.hpp"
#include "liability/scenarios.hpp"
#include "liability/solver1d.hpp"
#include "liability/version.hpp"

namespace {

using namespace liability;

namespace fs = std::filesystem;

std::string one_line(std::string msg) {
    for (auto& c : msg)
        if (c == '\n') c = ';';
    return msg;
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

void write_run_manifest(const RunConfig& config, const std::string& command) {
    write_manifest(out_path(config, "run.manifest.txt"), describe(config), command,
                   kVersion);
}

std::vector<std::string> sweep_columns(bool baseline) {
    std::vector<std::string> cols = {
        "p",       "k",       "c_h_hh",  "c_h_ah",   "c_a",     "prob_hh",
        "prob_ah", "prob_aa", "rate_hh", "rate_ah",  "rate_aa", "tr",
        "tl",      "tc",      "sc",      "moral_hazard", "mh_margin"};
    if (baseline) {
        cols.push_back("pure_av_sc");
        cols.push_back("pure_av_tr");
        cols.push_back("pure_av_c_a");
    }
    return cols;
}

std::vector<double> sweep_cells(const SweepRecord& record, bool baseline) {
    const EquilibriumReport& r = record.report;
    std::vector<double> cells = {
        r.p,
        record.k_star,
        r.profile.c_h1_hh,
        r.profile.c_h_ah,
        r.profile.c_a,
        r.hh.crash_probability,
        r.ah.crash_probability,
        r.aa.crash_probability,
        r.hh.crash_rate,
        r.ah.crash_rate,
        r.aa.crash_rate,
        r.tr,
        r.tl,
        r.tc,
        r.sc,
        record.moral_hazard.flag ? 1.0 : 0.0,
        record.moral_hazard.margin};
    if (baseline) {
        cells.push_back(record.pure_av.sc);
        cells.push_back(record.pure_av.tr);
        cells.push_back(record.pure_av.c_a);
    }
    return cells;
}

void flush_failed_row(CsvWriter& csv, std::size_t width, const std::string& context) {
    std::vector<std::string> cells(width, "FAILED");
    cells.back() = "FAILED:" + context;
    csv.row_text(cells);
    csv.flush();
}

int cmd_solve(const RunConfig& config) {
    write_run_manifest(config, "solve");
    CsvWriter csv(out_path(config, "solve.csv"), sweep_columns(config.pure_av_baseline));
    auto records = penetration_sweep({config.market.p}, config.policy, config.model,
                                     config.solver);
    csv.row(sweep_cells(records.front(), config.pure_av_baseline));
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    write_run_manifest(config, "sweep");
    auto cols = sweep_columns(config.pure_av_baseline);
    CsvWriter csv(out_path(config, "sweep.csv"), cols);
    for (double p : config.p_grid) {
        try {
            auto records =
                penetration_sweep({p}, config.policy, config.model, config.solver);
            csv.row(sweep_cells(records.front(), config.pure_av_baseline));
        } catch (const std::exception& e) {
            flush_failed_row(csv, cols.size(), one_line(e.what()));
            throw;
        }
    }
    return 0;
}

int cmd_sensitivity(const RunConfig& config) {
    if (config.sensitivity_values.empty())
        throw ConfigError("sensitivity needs scenario.values (or --values)");
    write_run_manifest(config, "sensitivity");
    std::vector<std::string> cols = {"parameter", "value"};
    for (const auto& c : sweep_columns(config.pure_av_baseline)) cols.push_back(c);
    CsvWriter csv(out_path(config, "sensitivity.csv"), cols);
    for (double value : config.sensitivity_values) {
        for (double p : config.p_grid) {
            try {
                auto curves =
                    sensitivity_sweep(config.sensitivity_parameter, {value}, {p},
                                      config.policy, config.model, config.solver);
                std::vector<std::string> cells = {config.sensitivity_parameter,
                                                  CsvWriter::format(value)};
                for (double x : sweep_cells(curves.front().records.front(),
                                            config.pure_av_baseline))
                    cells.push_back(CsvWriter::format(x));
                csv.row_text(cells);
            } catch (const std::exception& e) {
                flush_failed_row(csv, cols.size(), one_line(e.what()));
                throw;
            }
        }
    }
    return 0;
}

int cmd_lawmaker(const RunConfig& config) {
    write_run_manifest(config, "lawmaker");
    LawmakerTrace trace =
        optimize_k_frank_wolfe(config.market.p, config.model, config.solver);
    {
        CsvWriter csv(out_path(config, "lawmaker_trace.csv"),
                      {"iteration", "k", "sc", "gradient", "curvature"});
        for (const auto& step : trace.steps)
            csv.row({static_cast<double>(step.iteration), step.k, step.sc, step.gradient,
                     step.curvature});
    }
    {
        CsvWriter csv(out_path(config, "k_sweep.csv"),
                      {"k", "sc", "c_a", "c_h_ah", "c_h_hh"});
        KSweepResult sweep =
            k_sweep(config.market.p, config.model, config.solver, config.k_grid);
        for (const auto& row : sweep.rows)
            csv.row({row.k, row.sc, row.profile.c_a, row.profile.c_h_ah,
                     row.profile.c_h1_hh});
    }
    std::cout << "k_star=" << CsvWriter::format(trace.k_star)
              << " sc=" << CsvWriter::format(trace.sc_star)
              << " iterations=" << trace.gradient_iterations
              << " converged=" << (trace.converged ? "yes" : "no")
              << (trace.boundary_pinned ? " boundary" : "") << "\n";
    return trace.converged ? 0 : 3;
}

int cmd_endogenous(const RunConfig& config) {
    write_run_manifest(config, "endogenous");
    EndogenousResult result =
        endogenous_fixed_points(config.market.eta, config.policy, config.model,
                                config.solver, config.p_scan_resolution);
    CsvWriter csv(out_path(config, "endogenous.csv"),
                  {"eta", "p_star", "residual", "g_prime", "stable", "k", "c_a",
                   "c_h_ah", "c_h_hh", "sc", "tr", "tl", "tc"});
    for (const auto& fp : result.fixed_points)
        csv.row({result.eta, fp.p_star, fp.residual, fp.g_prime, fp.stable ? 1.0 : 0.0,
                 fp.k_star, fp.report.profile.c_a, fp.report.profile.c_h_ah,
                 fp.report.profile.c_h1_hh, fp.report.sc, fp.report.tr, fp.report.tl,
                 fp.report.tc});
    for (const auto& fp : result.fixed_points)
        std::cout << "p_star=" << CsvWriter::format(fp.p_star)
                  << (fp.stable ? " stable" : " unstable") << "\n";
    return 0;
}

int cmd_montecarlo(const RunConfig& config) {
    write_run_manifest(config, "montecarlo");
    double k = config.policy.strategic ? 1.0 : config.policy.k;
    if (config.policy.strategic)
        std::cerr << "note: montecarlo uses a fixed ratio; taking k=1\n";
    std::vector<std::string> cols = {"p",         "c_a",       "c_a_homogeneous",
                                     "deviation", "c_h_mean",  "c_h_stddev",
                                     "expected_loss_share"};
    CsvWriter csv(out_path(config, "montecarlo.csv"), cols);
    CsvWriter samples(out_path(config, "mc_samples.csv"), {"p", "sample", "w_h", "c_h"});
    for (double p : config.p_grid) {
        try {
            MonteCarloResult result =
                heterogeneous_mc(config.mc, {p}, k, config.model, config.solver);
            const MonteCarloPoint& point = result.points.front();
            double deviation =
                std::abs(point.c_a - point.c_a_homogeneous) / point.c_a_homogeneous;
            csv.row({point.p, point.c_a, point.c_a_homogeneous, deviation,
                     point.c_h_mean, point.c_h_stddev, point.expected_loss_share});
            for (std::size_t i = 0; i < point.c_h_samples.size(); ++i)
                samples.row({point.p, static_cast<double>(i), result.w_h_samples[i],
                             point.c_h_samples[i]});
        } catch (const std::exception& e) {
            flush_failed_row(csv, cols.size(), one_line(e.what()));
            throw;
        }
    }
    return 0;
}

int cmd_check(const RunConfig& config) {
    write_run_manifest(config, "check");
    double k = config.policy.strategic ? 1.0 : config.policy.k;
    SSEReport report =
        check_sse_conditions(k, config.market.p, config.model, config.solver);
    CsvWriter csv(out_path(config, "sse_check.csv"),
                  {"condition", "pass", "min_value", "samples", "skipped"});
    struct Named {
        const char* name;
        const SSECondition* cond;
    };
    const Named conditions[] = {
        {"follower_convexity", &report.follower_convexity},
        {"leader_convexity", &report.leader_convexity},
        {"lawmaker_convexity", &report.lawmaker_convexity},
        {"hh_jacobian_definite", &report.hh_jacobian_definite},
    };
    int index = 0;
    for (const auto& [name, cond] : conditions) {
        ++index;
        csv.row_text({name, cond->pass ? "1" : "0", CsvWriter::format(cond->min_value),
                      std::to_string(cond->samples), std::to_string(cond->skipped)});
        std::cout << "condition" << index << " " << (cond->pass ? "PASS" : "FAIL")
                  << " min=" << CsvWriter::format(cond->min_value)
                  << " samples=" << cond->samples << " skipped=" << cond->skipped
                  << " (" << name << ")\n";
    }
    return report.all_pass() ? 0 : 3;
}

int cmd_oracle(const RunConfig& config) {
    write_run_manifest(config, "oracle");
    OracleGame game = OracleGame::AH;
    if (config.oracle_game == "HH") game = OracleGame::HH;
    else if (config.oracle_game == "AV") game = OracleGame::PureAV;
    else if (config.oracle_game == "EXCLUSIVE") game = OracleGame::Exclusive;
    double k = config.policy.strategic ? 1.0 : config.policy.k;
    OracleResult result = grid_oracle_equilibrium(game, k, config.market.p, config.model,
                                                  config.oracle_resolution);
    CsvWriter csv(out_path(config, "oracle.csv"),
                  {"game", "k", "p", "resolution", "c_1", "c_2"});
    csv.row_text({config.oracle_game, CsvWriter::format(k),
                  CsvWriter::format(config.market.p),
                  std::to_string(config.oracle_resolution), CsvWriter::format(result.c_1),
                  CsvWriter::format(result.c_2)});
    std::cout << "c_1=" << CsvWriter::format(result.c_1)
              << " c_2=" << CsvWriter::format(result.c_2) << "\n";
    return 0;
}

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = ".";
    long seed = -1;
    std::string p_grid, k_grid;
    double eta = -1.0;
    double p = -1.0;
    std::string k;
    bool pure_av_baseline = false;
    std::string parameter;
    std::string values;
    long mc_samples = -1;
    long resolution = -1;
    std::string oracle_game;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "configuration file (key = value)");
    cmd->add_option("--set", flags.sets, "override KEY=VALUE (repeatable)");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "random seed (scenario.seed)");
    cmd->add_option("--p-grid", flags.p_grid, "penetration grid start:stop:step");
    cmd->add_option("--k-grid", flags.k_grid, "liability-ratio grid start:stop:step");
    cmd->add_option("--eta", flags.eta, "endogenous sensitivity (scenario.eta)");
    cmd->add_option("--p", flags.p, "penetration rate (scenario.p)");
    cmd->add_option("--k", flags.k, "liability ratio or 'strategic' (scenario.k)");
    cmd->add_flag("--pure-av-baseline", flags.pure_av_baseline,
                  "append the p=1 comparison columns to sweep outputs");
}

RunConfig assemble_config(const CommonFlags& flags) {
    std::vector<std::string> overrides = flags.sets;
    if (flags.seed >= 0) overrides.push_back("scenario.seed=" + std::to_string(flags.seed));
    if (!flags.p_grid.empty()) overrides.push_back("scenario.p_grid=" + flags.p_grid);
    if (!flags.k_grid.empty()) overrides.push_back("scenario.k_grid=" + flags.k_grid);
    if (flags.eta >= 0)
        overrides.push_back("scenario.eta=" + CsvWriter::format(flags.eta));
    if (flags.p >= 0) overrides.push_back("scenario.p=" + CsvWriter::format(flags.p));
    if (!flags.k.empty()) overrides.push_back("scenario.k=" + flags.k);
    if (flags.pure_av_baseline) overrides.push_back("scenario.pure_av_baseline=true");
    if (!flags.parameter.empty())
        overrides.push_back("scenario.parameter=" + flags.parameter);
    if (!flags.values.empty()) overrides.push_back("scenario.values=" + flags.values);
    if (flags.mc_samples >= 0)
        overrides.push_back("scenario.mc_samples=" + std::to_string(flags.mc_samples));
    if (flags.resolution >= 0)
        overrides.push_back("scenario.oracle_resolution=" +
                            std::to_string(flags.resolution));
    if (!flags.oracle_game.empty())
        overrides.push_back("scenario.oracle_game=" + flags.oracle_game);

    RunConfig config = parse_config_file(flags.config_path, overrides);
    config.out_dir = flags.out_dir;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir))
        throw ConfigError("output directory '" + config.out_dir + "' is not usable");
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium engine for the AV/HV liability game"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* solve = app.add_subcommand("solve", "equilibrium at one (p, k) point");
    auto* sweep = app.add_subcommand("sweep", "penetration sweep (fixed or strategic k)");
    auto* sensitivity =
        app.add_subcommand("sensitivity", "re-run the sweep while varying one parameter");
    auto* lawmaker =
        app.add_subcommand("lawmaker", "optimal liability ratio at one p, plus k sweep");
    auto* endogenous =
        app.add_subcommand("endogenous", "fixed points of p = -eta L_AV + 1");
    auto* montecarlo =
        app.add_subcommand("montecarlo", "heterogeneous-driver Monte Carlo");
    auto* check = app.add_subcommand("check", "existence/uniqueness condition report");
    auto* oracle = app.add_subcommand("oracle", "brute-force grid equilibrium");
    for (CLI::App* cmd :
         {solve, sweep, sensitivity, lawmaker, endogenous, montecarlo, check, oracle})
        add_common(cmd, flags);
    sensitivity->add_option("--parameter", flags.parameter,
                            "alpha | a | h | w_a_sen | w_a_loss");
    sensitivity->add_option("--values", flags.values, "comma-separated parameter values");
    montecarlo->add_option("--samples", flags.mc_samples, "Monte Carlo sample count");
    oracle->add_option("--game", flags.oracle_game, "HH | AH | AV | EXCLUSIVE");
    oracle->add_option("--resolution", flags.resolution, "grid points per axis");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config = assemble_config(flags);
        if (solve->parsed()) return cmd_solve(config);
        if (sweep->parsed()) return cmd_sweep(config);
        if (sensitivity->parsed()) return cmd_sensitivity(config);
        if (lawmaker->parsed()) return cmd_lawmaker(config);
        if (endogenous->parsed()) return cmd_endogenous(config);
        if (montecarlo->parsed()) return cmd_montecarlo(config);
        if (check->parsed()) return cmd_check(config);
        if (oracle->parsed()) return cmd_oracle(config);
        std::cerr << "error: cli: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "error: solver: " << one_line(e.what()) << "\n";
        return 3;
    } catch (const NonUnimodalError& e) {
        std::cerr << "error: solver: " << one_line(e.what()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << one_line(e.what()) << "\n";
        return 1;
    }
}
