#include "liability/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "liability/solver1d.hpp"

namespace liability {

namespace {

constexpr int kFollowerScanPoints = 64;
constexpr double kBisectTol = 1e-13;

double lower_care() { return kFeasEps; }
double upper_care_hv(const ModelParams& params) { return params.c_h_max - kFeasEps; }
double upper_care_av(const ModelParams& params) { return params.c_a_max - kFeasEps; }

double grid_point(double lo, double hi, int resolution, int i) {
    if (resolution == 1) return 0.5 * (lo + hi);
    return (i == resolution - 1) ? hi : lo + i * (hi - lo) / (resolution - 1);
}

BestResponse follower_response(double c_a, double k, double w_h,
                               const ModelParams& params, const SolverConfig& config) {
    ModelParams local = params;
    local.w_h = w_h;
    double lo = lower_care();
    double hi = upper_care_hv(params);
    Minimum1D m = minimize_scalar(
        [&](double c) { return cost_hv_ah(c, c_a, k, local); },
        [&](double c) { return cost_hv_ah_deriv_ch(c, c_a, k, local); }, lo, hi,
        kFollowerScanPoints, "best_response_hv_ah (follower objective, condition 1)",
        kBisectTol);
    (void)config;
    return {m.x, m.derivative_residual, m.at_lower, m.at_upper};
}

}  // namespace

std::vector<std::string> validate(const SolverConfig& config) {
    std::vector<std::string> errors;
    if (!(config.care_tolerance > 0)) errors.push_back("solver.care_tolerance must be > 0");
    if (config.grid_resolution < 100) errors.push_back("solver.grid_resolution must be >= 100");
    if (config.max_iterations < 1) errors.push_back("solver.max_iterations must be >= 1");
    if (!(config.fd_step > 0)) errors.push_back("solver.fd_step must be > 0");
    return errors;
}

BestResponse best_response_hv_ah(double c_a, double k, double p,
                                 const ModelParams& params, const SolverConfig& config) {
    if (!(c_a > 0 && c_a < params.c_a_max + kFeasEps))
        throw std::domain_error("best_response_hv_ah: c_a outside (0, c_a_max)");
    if (!(k > 0)) throw std::domain_error("best_response_hv_ah: k must be positive");
    if (!(p >= 0 && p <= 1)) throw std::domain_error("best_response_hv_ah: p outside [0,1]");
    return follower_response(c_a, k, params.w_h, params, config);
}

BestResponse best_response_hv_ah_weighted(double c_a, double k, double w_h,
                                          const ModelParams& params,
                                          const SolverConfig& config) {
    return follower_response(c_a, k, w_h, params, config);
}

NashResult nash_hh(const ModelParams& params, const SolverConfig& config) {
    double lo = lower_care();
    double hi = upper_care_hv(params);
    auto respond = [&](double other) {
        Minimum1D m = minimize_scalar(
            [&](double c) { return cost_hv_hh(c, other, params); },
            [&](double c) { return cost_hv_hh_deriv_own(c, other, params); }, lo, hi,
            kFollowerScanPoints, "nash_hh (HH best response)", kBisectTol);
        return m.x;
    };

    NashResult result;
    double c_1 = 0.5 * (lo + hi);
    double c_2 = c_1;
    double prev_delta = std::numeric_limits<double>::infinity();
    double prev_sign = 0.0;
    for (int it = 0; it < config.max_iterations; ++it) {
        double c_1_next = respond(c_2);
        double c_2_next = respond(c_1_next);
        double delta = std::max(std::abs(c_1_next - c_1), std::abs(c_2_next - c_2));
        double sign = (c_1_next > c_1) ? 1.0 : -1.0;
        if (sign == -prev_sign && delta >= prev_delta) {
            // oscillating without contraction: halve the step
            c_1_next = 0.5 * (c_1 + c_1_next);
            c_2_next = 0.5 * (c_2 + c_2_next);
            delta = std::max(std::abs(c_1_next - c_1), std::abs(c_2_next - c_2));
            result.damped = true;
        }
        c_1 = c_1_next;
        c_2 = c_2_next;
        result.iterations = it + 1;
        result.residual = delta;
        if (delta <= config.care_tolerance) {
            result.c_1 = c_1;
            result.c_2 = c_2;
            return result;
        }
        prev_delta = delta;
        prev_sign = sign;
    }
    throw SolverError("nash_hh: best-response iteration did not converge within " +
                          std::to_string(config.max_iterations) + " iterations",
                      c_1, result.residual);
}

StackelbergResult stackelberg_ah(double k, double p, const ModelParams& params,
                                 const SolverConfig& config) {
    if (!(p > 0 && p < 1))
        throw std::domain_error("stackelberg_ah: p must be in (0,1)");
    if (!(k > 0)) throw std::domain_error("stackelberg_ah: k must be positive");

    double lo = lower_care();
    double hi = upper_care_av(params);
    auto leader_cost = [&](double c_a) {
        BestResponse br = follower_response(c_a, k, params.w_h, params, config);
        return cost_manufacturer(c_a, br.care, k, p, params);
    };

    StackelbergResult result;
    Minimum1D m = minimize_scalar_scan(leader_cost, lo, hi, config.grid_resolution,
                                       1e-6, 1e-12, &result.leader_tie);
    result.c_a = m.x;
    result.leader_at_lower = m.at_lower;
    result.leader_at_upper = m.at_upper;
    BestResponse br = follower_response(result.c_a, k, params.w_h, params, config);
    result.c_h_ah = br.care;
    result.follower_at_lower = br.at_lower;
    result.follower_at_upper = br.at_upper;
    return result;
}

ScalarOptimum pure_av_optimum(const ModelParams& params, const SolverConfig& config) {
    Minimum1D m = minimize_scalar(
        [&](double c) { return cost_pure_av(c, params); },
        [&](double c) { return cost_pure_av_deriv(c, params); }, lower_care(),
        upper_care_av(params), std::min(config.grid_resolution, 256),
        "pure_av_optimum (monopoly objective)", kBisectTol);
    return {m.x, m.at_lower, m.at_upper};
}

ExclusiveLanesResult exclusive_lanes_equilibrium(double p, const ModelParams& params,
                                                 const SolverConfig& config) {
    if (!(p > 0 && p <= 1))
        throw std::domain_error("exclusive_lanes_equilibrium: p must be in (0,1]");
    ExclusiveLanesResult result;
    Minimum1D m = minimize_scalar(
        [&](double c) { return cost_exclusive_av(c, p, params); },
        [&](double c) { return cost_exclusive_av_deriv(c, p, params); }, lower_care(),
        upper_care_av(params), std::min(config.grid_resolution, 256),
        "exclusive_lanes_equilibrium (reweighted AA objective)", kBisectTol);
    result.av = {m.x, m.at_lower, m.at_upper};
    result.hh = nash_hh(params, config);
    return result;
}

namespace {

double second_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

void observe(SSECondition& cond, double value) {
    if (cond.samples == 0 || value < cond.min_value) cond.min_value = value;
    ++cond.samples;
}

}  // namespace

SSEReport check_sse_conditions(double k, double p, const ModelParams& params,
                               const SolverConfig& config) {
    if (!(k > 0)) throw std::domain_error("check_sse_conditions: k must be positive");
    if (!(p > 0 && p < 1))
        throw std::domain_error("check_sse_conditions: p must be in (0,1)");

    SSEReport report;
    const double h2 = 1e-3;  // second-difference step on care axes
    double lo_h = lower_care() + h2;
    double hi_h = upper_care_hv(params) - h2;
    double lo_a = lower_care() + h2;
    double hi_a = upper_care_av(params) - h2;

    // Condition 1: follower convexity over the (c_a, c_h) box.
    {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double c_a = grid_point(lo_a, hi_a, n, i);
            for (int j = 0; j < n; ++j) {
                double c_h = grid_point(lo_h, hi_h, n, j);
                if (severity_clamped(Scenario::AH, c_a, c_h + h2, params)) {
                    ++report.follower_convexity.skipped;
                    continue;
                }
                observe(report.follower_convexity,
                        second_difference(
                            [&](double c) { return cost_hv_ah(c, c_a, k, params); }, c_h,
                            h2));
            }
        }
    }

    // Condition 2: leader convexity along the follower response map.
    {
        const int n = 24;
        for (int i = 0; i < n; ++i) {
            double c_a = grid_point(lo_a, hi_a, n, i);
            if (severity_clamped(Scenario::AA, c_a + h2, c_a + h2, params)) {
                ++report.leader_convexity.skipped;
                continue;
            }
            BestResponse br = follower_response(c_a + h2, k, params.w_h, params, config);
            if (severity_clamped(Scenario::AH, c_a + h2, br.care, params)) {
                ++report.leader_convexity.skipped;
                continue;
            }
            observe(report.leader_convexity,
                    second_difference(
                        [&](double c) {
                            BestResponse r =
                                follower_response(c, k, params.w_h, params, config);
                            return cost_manufacturer(c, r.care, k, p, params);
                        },
                        c_a, h2));
        }
    }

    // Condition 3: lawmaker convexity in k at the queried ratio, along the
    // chain k -> c_a -> c_h with HH cares at their k-independent Nash values.
    {
        NashResult nash = nash_hh(params, config);
        auto sc_of_k = [&](double kk) {
            StackelbergResult eq = stackelberg_ah(kk, p, params, config);
            CareProfile profile{nash.c_1, nash.c_2, eq.c_h_ah, eq.c_a, kk};
            return social_cost(profile, p, params);
        };
        double hk = 0.05 * std::max(1.0, k);
        if (k - hk <= 0) hk = 0.5 * k;
        observe(report.lawmaker_convexity, second_difference(sc_of_k, k, hk));
    }

    // Condition 4: Rosen positive definiteness near the HH equilibrium.
    {
        NashResult nash = nash_hh(params, config);
        double center = 0.5 * (nash.c_1 + nash.c_2);
        double lo = std::max(lo_h, 0.5 * center);
        double hi = std::min(hi_h, 1.5 * center);
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double c_1 = grid_point(lo, hi, n, i);
            for (int j = 0; j < n; ++j) {
                double c_2 = grid_point(lo, hi, n, j);
                if (severity_clamped(Scenario::HH, c_1 + h2, c_2 + h2, params)) {
                    ++report.hh_jacobian_definite.skipped;
                    continue;
                }
                double j11 = second_difference(
                    [&](double c) { return cost_hv_hh(c, c_2, params); }, c_1, h2);
                double j22 = second_difference(
                    [&](double c) { return cost_hv_hh(c, c_1, params); }, c_2, h2);
                double j12 = (cost_hv_hh(c_1 + h2, c_2 + h2, params) -
                              cost_hv_hh(c_1 + h2, c_2 - h2, params) -
                              cost_hv_hh(c_1 - h2, c_2 + h2, params) +
                              cost_hv_hh(c_1 - h2, c_2 - h2, params)) /
                             (4.0 * h2 * h2);
                double j21 = (cost_hv_hh(c_2 + h2, c_1 + h2, params) -
                              cost_hv_hh(c_2 + h2, c_1 - h2, params) -
                              cost_hv_hh(c_2 - h2, c_1 + h2, params) +
                              cost_hv_hh(c_2 - h2, c_1 - h2, params)) /
                             (4.0 * h2 * h2);
                double a11 = 2.0 * j11, a22 = 2.0 * j22, a12 = j12 + j21;
                double tr = a11 + a22;
                double det = a11 * a22 - a12 * a12;
                double disc = std::max(0.0, tr * tr - 4.0 * det);
                observe(report.hh_jacobian_definite, 0.5 * (tr - std::sqrt(disc)));
            }
        }
    }

    for (SSECondition* cond :
         {&report.follower_convexity, &report.leader_convexity,
          &report.lawmaker_convexity, &report.hh_jacobian_definite})
        cond->pass = cond->samples > 0 && cond->min_value > 0.0;
    return report;
}

namespace {

// 1-D enumeration with smaller-care tie-break and parabolic refinement.
OracleResult oracle_scalar(const std::function<double(double)>& f, double lo, double hi,
                           int resolution) {
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> values(resolution);
    for (int i = 0; i < resolution; ++i) {
        values[i] = f(grid_point(lo, hi, resolution, i));
        if (values[i] < best_value) {
            best_value = values[i];
            best = i;
        }
    }
    double x = grid_point(lo, hi, resolution, best);
    if (best > 0 && best < resolution - 1) {
        double h = (hi - lo) / (resolution - 1);
        x = parabolic_refine(x, h, values[best - 1], values[best], values[best + 1]);
    }
    return {x, 0.0};
}

}  // namespace

OracleResult grid_oracle_equilibrium(OracleGame game, double k, double p,
                                     const ModelParams& params, int resolution) {
    if (resolution < 1)
        throw std::invalid_argument("grid_oracle_equilibrium: resolution must be >= 1");
    double lo_h = lower_care(), hi_h = upper_care_hv(params);
    double lo_a = lower_care(), hi_a = upper_care_av(params);

    switch (game) {
        case OracleGame::PureAV:
            return oracle_scalar([&](double c) { return cost_pure_av(c, params); }, lo_a,
                                 hi_a, resolution);
        case OracleGame::Exclusive:
            return oracle_scalar([&](double c) { return cost_exclusive_av(c, p, params); },
                                 lo_a, hi_a, resolution);
        case OracleGame::HH: {
            // Discrete best-response fixed point, then sub-cell refinement of
            // each player's response at the terminal state.
            auto respond = [&](double other, int& index) {
                int best = 0;
                double best_value = std::numeric_limits<double>::infinity();
                for (int i = 0; i < resolution; ++i) {
                    double v = cost_hv_hh(grid_point(lo_h, hi_h, resolution, i), other,
                                          params);
                    if (v < best_value) {
                        best_value = v;
                        best = i;
                    }
                }
                index = best;
                return grid_point(lo_h, hi_h, resolution, best);
            };
            int i1 = resolution / 2, i2 = resolution / 2;
            double c_1 = grid_point(lo_h, hi_h, resolution, i1);
            double c_2 = grid_point(lo_h, hi_h, resolution, i2);
            int prev_i1 = -1, prev_i2 = -1;
            for (int it = 0; it < 200; ++it) {
                int n1, n2;
                double c_1n = respond(c_2, n1);
                double c_2n = respond(c_1n, n2);
                if (n1 == i1 && n2 == i2) break;
                if (n1 == prev_i1 && n2 == prev_i2) {
                    // two-cycle between adjacent cells: keep the smaller-care state
                    if (std::min(n1, i1) == i1) { n1 = i1; n2 = i2; c_1n = c_1; c_2n = c_2; }
                    i1 = n1; i2 = n2; c_1 = c_1n; c_2 = c_2n;
                    break;
                }
                prev_i1 = i1; prev_i2 = i2;
                i1 = n1; i2 = n2; c_1 = c_1n; c_2 = c_2n;
            }
            double h = (resolution > 1) ? (hi_h - lo_h) / (resolution - 1) : 0.0;
            double r_1 = c_1, r_2 = c_2;
            if (resolution > 2 && i1 > 0 && i1 < resolution - 1)
                r_1 = parabolic_refine(c_1, h, cost_hv_hh(c_1 - h, c_2, params),
                                       cost_hv_hh(c_1, c_2, params),
                                       cost_hv_hh(c_1 + h, c_2, params));
            if (resolution > 2 && i2 > 0 && i2 < resolution - 1)
                r_2 = parabolic_refine(c_2, h, cost_hv_hh(c_2 - h, c_1, params),
                                       cost_hv_hh(c_2, c_1, params),
                                       cost_hv_hh(c_2 + h, c_1, params));
            return {r_1, r_2};
        }
        case OracleGame::AH: {
            if (!(p > 0 && p < 1))
                throw std::domain_error("grid_oracle_equilibrium(AH): p must be in (0,1)");
            double h_h = (resolution > 1) ? (hi_h - lo_h) / (resolution - 1) : 0.0;
            std::vector<double> follower_cost(resolution);
            auto follower_best = [&](double c_a) {
                int best = 0;
                double best_value = std::numeric_limits<double>::infinity();
                for (int j = 0; j < resolution; ++j) {
                    follower_cost[j] =
                        cost_hv_ah(grid_point(lo_h, hi_h, resolution, j), c_a, k, params);
                    if (follower_cost[j] < best_value) {
                        best_value = follower_cost[j];
                        best = j;
                    }
                }
                double c_h = grid_point(lo_h, hi_h, resolution, best);
                if (resolution > 2 && best > 0 && best < resolution - 1)
                    c_h = parabolic_refine(c_h, h_h, follower_cost[best - 1],
                                           follower_cost[best], follower_cost[best + 1]);
                return c_h;
            };
            std::vector<double> leader_cost(resolution);
            int best = 0;
            double best_value = std::numeric_limits<double>::infinity();
            for (int i = 0; i < resolution; ++i) {
                double c_a = grid_point(lo_a, hi_a, resolution, i);
                leader_cost[i] = cost_manufacturer(c_a, follower_best(c_a), k, p, params);
                if (leader_cost[i] < best_value) {
                    best_value = leader_cost[i];
                    best = i;
                }
            }
            double c_a = grid_point(lo_a, hi_a, resolution, best);
            if (resolution > 2 && best > 0 && best < resolution - 1) {
                double h_a = (hi_a - lo_a) / (resolution - 1);
                c_a = parabolic_refine(c_a, h_a, leader_cost[best - 1], leader_cost[best],
                                       leader_cost[best + 1]);
            }
            return {c_a, follower_best(c_a)};
        }
    }
    throw std::logic_error("grid_oracle_equilibrium: unknown game");
}

}  // namespace liability
