// Lawmaker level: social cost as a function of the liability ratio k,
// the gradient descent that finds the optimal ratio, and k-sweep tables.
#pragma once

#include <functional>
#include <vector>

#include "liability/equilibrium.hpp"
#include "liability/model.hpp"

namespace liability {

struct KSolution {
    CareProfile profile;
    double sc = 0.0;
};

// Composes the k-independent HH Nash equilibrium with the AH Stackelberg
// equilibrium at ratio k and evaluates the social cost on the assembled
// profile. The Nash result may be precomputed and passed in, since k and p
// never enter the HH game.
KSolution solve_profile_at_k(double k, double p, const ModelParams& params,
                             const SolverConfig& config, const NashResult* nash = nullptr);

double social_cost_of_k(double k, double p, const ModelParams& params,
                        const SolverConfig& config, const NashResult* nash = nullptr);

struct LawmakerStep {
    int iteration = 0;
    double k = 0.0;
    double sc = 0.0;
    double gradient = 0.0;
    double curvature = 0.0;
};

struct LawmakerTrace {
    std::vector<LawmakerStep> steps;
    double k_star = 0.0;
    double sc_star = 0.0;
    int gradient_iterations = 0;
    bool converged = false;
    bool boundary_pinned = false;  // stuck on a bound with the gradient pointing out
};

// Descent on SC(k) from k_0 using a three-point central-difference stencil
// (step max(1e-4, 1e-4 k)). The raw gradient of this landscape is of order
// 1e-3, far too small for the diminishing-step schedule gamma_n = 2/(n+2)
// to traverse it, so the step is the curvature-normalized -SC'/SC'' inside
// a 0.5 max(1,k) trust region; the gamma_n schedule damps the bounded
// fallback step taken where the curvature estimate is not positive.
// Stops when |k_{n+1} - k_n| <= 1e-4 or after max_iter iterations.
LawmakerTrace optimize_k_frank_wolfe(double p, const ModelParams& params,
                                     const SolverConfig& config, double k_0 = 1.0,
                                     double k_tolerance = 1e-4, int max_iter = 10000);

// Same descent on an arbitrary scalar objective; lets tests inject a stub
// objective with a known minimizer.
LawmakerTrace minimize_k_objective(const std::function<double(double)>& objective,
                                   double k_0, double k_lo, double k_hi,
                                   double k_tolerance = 1e-4, int max_iter = 10000);

struct KSweepRow {
    double k = 0.0;
    double sc = 0.0;
    CareProfile profile;
};

struct KSweepResult {
    std::vector<KSweepRow> rows;
    int argmin_index = 0;
};

KSweepResult k_sweep(double p, const ModelParams& params, const SolverConfig& config,
                     const std::vector<double>& k_grid);

}  // namespace liability
