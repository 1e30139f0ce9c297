#include "liability/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liability {

KSolution solve_profile_at_k(double k, double p, const ModelParams& params,
                             const SolverConfig& config, const NashResult* nash) {
    if (!(k > 0 && k <= params.k_max))
        throw std::domain_error("solve_profile_at_k: k outside (0, k_max]");
    NashResult local;
    if (nash == nullptr) {
        local = nash_hh(params, config);
        nash = &local;
    }
    StackelbergResult eq = stackelberg_ah(k, p, params, config);
    KSolution solution;
    solution.profile = {nash->c_1, nash->c_2, eq.c_h_ah, eq.c_a, k};
    solution.sc = social_cost(solution.profile, p, params);
    return solution;
}

double social_cost_of_k(double k, double p, const ModelParams& params,
                        const SolverConfig& config, const NashResult* nash) {
    return solve_profile_at_k(k, p, params, config, nash).sc;
}

LawmakerTrace minimize_k_objective(const std::function<double(double)>& objective,
                                   double k_0, double k_lo, double k_hi,
                                   double k_tolerance, int max_iter) {
    if (!(k_0 > 0)) throw std::domain_error("lawmaker descent: k_0 must be positive");
    LawmakerTrace trace;
    double k = std::clamp(k_0, k_lo, k_hi);
    int pinned_streak = 0;
    for (int n = 0; n < max_iter; ++n) {
        double h = std::max(1e-4, 1e-4 * k);
        if (k - h < k_lo) h = 0.5 * (k - k_lo) > 0 ? 0.5 * (k - k_lo) : 1e-6;
        double f_0 = objective(k);
        double f_p = objective(std::min(k + h, k_hi));
        double f_m = objective(std::max(k - h, k_lo));
        double gradient = (f_p - f_m) / (2.0 * h);
        double curvature = (f_p - 2.0 * f_0 + f_m) / (h * h);
        trace.steps.push_back({n, k, f_0, gradient, curvature});
        trace.gradient_iterations = n + 1;

        double step;
        if (curvature > 1e-9) {
            step = gradient / curvature;
        } else {
            double gamma = 2.0 / (n + 2.0);
            double direction = (gradient > 0) ? 1.0 : (gradient < 0 ? -1.0 : 0.0);
            step = gamma * direction * 0.25 * std::max(1.0, k);
        }
        double cap = 0.5 * std::max(1.0, std::abs(k));
        step = std::clamp(step, -cap, cap);
        double k_next = std::clamp(k - step, k_lo, k_hi);

        bool at_bound = (k_next == k_lo && gradient > 0) || (k_next == k_hi && gradient < 0);
        pinned_streak = at_bound ? pinned_streak + 1 : 0;

        if (std::abs(k_next - k) <= k_tolerance) {
            trace.converged = true;
            trace.boundary_pinned = at_bound;
            k = k_next;
            break;
        }
        if (pinned_streak >= 2) {
            trace.boundary_pinned = true;
            trace.converged = true;
            k = k_next;
            break;
        }
        k = k_next;
    }
    trace.k_star = k;
    trace.sc_star = objective(k);
    return trace;
}

LawmakerTrace optimize_k_frank_wolfe(double p, const ModelParams& params,
                                     const SolverConfig& config, double k_0,
                                     double k_tolerance, int max_iter) {
    if (!(k_0 > 0 && k_0 <= params.k_max))
        throw std::domain_error("optimize_k_frank_wolfe: k_0 outside (0, k_max]");
    NashResult nash = nash_hh(params, config);
    auto objective = [&](double k) {
        return social_cost_of_k(k, p, params, config, &nash);
    };
    return minimize_k_objective(objective, k_0, kFeasEps, params.k_max, k_tolerance,
                                max_iter);
}

KSweepResult k_sweep(double p, const ModelParams& params, const SolverConfig& config,
                     const std::vector<double>& k_grid) {
    if (k_grid.empty()) throw std::invalid_argument("k_sweep: empty k grid");
    NashResult nash = nash_hh(params, config);
    KSweepResult result;
    result.rows.reserve(k_grid.size());
    for (double k : k_grid) {
        KSolution solution = solve_profile_at_k(k, p, params, config, &nash);
        result.rows.push_back({k, solution.sc, solution.profile});
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        if (result.rows[i].sc < result.rows[result.argmin_index].sc)
            result.argmin_index = static_cast<int>(i);
    return result;
}

}  // namespace liability
