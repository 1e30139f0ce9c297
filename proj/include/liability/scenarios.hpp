// Experiment suite: penetration sweeps with fixed or strategic liability
// ratios, parameter sensitivity, exclusive-lane comparisons, the
// heterogeneous-driver Monte Carlo, and endogenous-penetration fixed points.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liability/hierarchy.hpp"
#include "liability/model.hpp"

namespace liability {

// Either a fixed liability ratio or a strategic lawmaker who re-optimizes
// k at every market composition.
struct KPolicy {
    bool strategic = false;
    double k = 1.0;

    static KPolicy fixed(double k) { return {false, k}; }
    static KPolicy lawmaker() { return {true, 1.0}; }
};

struct MoralHazard {
    bool flag = false;
    double margin = 0.0;  // c_h_hh - c_h_ah
};

// Moral hazard per Definition 1: the HV exercises less care against AVs
// than against other HVs.
MoralHazard detect_moral_hazard(const EquilibriumReport& report, double tolerance);

struct PureAvBaseline {
    double c_a = 0.0;
    double sc = 0.0;
    double tr = 0.0;
};

// Monopoly market measures at p = 1, used as the comparison line in sweeps.
PureAvBaseline pure_av_baseline(const ModelParams& params, const SolverConfig& config);

struct SweepRecord {
    std::string variable;  // name of the swept quantity
    double value = 0.0;    // its value at this grid point
    EquilibriumReport report;
    PureAvBaseline pure_av;
    MoralHazard moral_hazard;
    double k_star = 0.0;   // equals the fixed k unless the lawmaker is strategic
};

// Solves the game at every grid point. GameHH is solved once (p never
// enters it); under a strategic policy the lawmaker's k is re-optimized
// independently at each point.
std::vector<SweepRecord> penetration_sweep(const std::vector<double>& p_grid,
                                           const KPolicy& policy,
                                           const ModelParams& params,
                                           const SolverConfig& config);

// Re-runs the sweep for each value of one named parameter
// (alpha|a|h|w_a_sen|w_a_loss) and returns the paired curves.
struct SensitivityCurve {
    std::string parameter;
    double value = 0.0;
    std::vector<SweepRecord> records;
};

std::vector<SensitivityCurve> sensitivity_sweep(const std::string& parameter,
                                                const std::vector<double>& values,
                                                const std::vector<double>& p_grid,
                                                const KPolicy& policy,
                                                const ModelParams& params,
                                                const SolverConfig& config);

// Exclusive-lane records. Social cost and losses drop the AH terms (those
// encounters no longer exist); the crash rate uses the conditional
// same-lane encounter distribution p^2/(p^2+(1-p)^2), (1-p)^2/(...), the
// same reweighting the manufacturer's objective uses.
struct ExclusiveLaneRecord {
    double p = 0.0;
    double c_a = 0.0;
    double c_h_hh = 0.0;
    double tl = 0.0;
    double tc = 0.0;
    double sc = 0.0;
    double tr = 0.0;
};

std::vector<ExclusiveLaneRecord> exclusive_lane_sweep(const std::vector<double>& p_grid,
                                                      const ModelParams& params,
                                                      const SolverConfig& config);

struct HeterogeneityConfig {
    double mean = 0.5;
    double stddev = 0.1;
    double lower = 0.0;   // truncation interval, within (0,1)
    double upper = 1.0;
    int samples = 1000;
    std::uint64_t seed = 1;
};

std::vector<std::string> validate(const HeterogeneityConfig& config);

// Truncated-normal draw by rejection against the untruncated normal;
// sample i uses its own generator seeded seed + i, so results are
// independent of evaluation order. stddev = 0 is the point mass at mean.
std::vector<double> sample_truncated_normal(const HeterogeneityConfig& config);

struct MonteCarloPoint {
    double p = 0.0;
    double c_a = 0.0;             // manufacturer optimum against the population
    double c_a_homogeneous = 0.0; // same market with every driver at the mean weight
    double c_h_mean = 0.0;
    double c_h_stddev = 0.0;
    double expected_loss_share = 0.0;  // E[L^AH s_A] at the optimum
    std::vector<double> c_h_samples;   // per-driver responses at the optimum
};

struct MonteCarloResult {
    std::vector<MonteCarloPoint> points;
    std::vector<double> w_h_samples;
};

// Heterogeneous-driver market: per grid point the manufacturer minimizes
// its cost with the AH loss-share term replaced by the sample average
// E[L s_A] over drivers with weights drawn from the truncated normal.
// With stddev = 0 the sample average degenerates to the single response at
// the mean and the homogeneous solution is reproduced exactly.
MonteCarloResult heterogeneous_mc(const HeterogeneityConfig& mc_config,
                                  const std::vector<double>& p_grid, double k,
                                  const ModelParams& params, const SolverConfig& config);

struct FixedPoint {
    double p_star = 0.0;
    double residual = 0.0;   // p* + eta L_AV(p*) - 1
    double g_prime = 0.0;    // slope of the defining function at the root
    bool stable = false;     // g_prime > 0
    double k_star = 0.0;
    EquilibriumReport report;
};

struct EndogenousResult {
    double eta = 0.0;
    std::vector<FixedPoint> fixed_points;  // every root found on the scan
};

// Endogenous penetration p = -eta L_AV(p) + 1: scans g(p) = p + eta L_AV(p) - 1
// over (0,1), brackets every sign change and bisects each to 1e-4. eta = 0
// degenerates to the pure-AV market p* = 1.
EndogenousResult endogenous_fixed_points(double eta, const KPolicy& policy,
                                         const ModelParams& params,
                                         const SolverConfig& config,
                                         int p_scan_resolution = 200);

// AV-related crash loss p^2 L^AA + 2p(1-p) L^AH at the equilibrium for p.
double av_related_loss(double p, const KPolicy& policy, const ModelParams& params,
                       const SolverConfig& config, const NashResult* nash = nullptr,
                       double* k_star = nullptr);

}  // namespace liability
