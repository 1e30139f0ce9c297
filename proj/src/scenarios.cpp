#include "liability/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "liability/solver1d.hpp"

namespace liability {

MoralHazard detect_moral_hazard(const EquilibriumReport& report, double tolerance) {
    MoralHazard mh;
    mh.margin = report.profile.c_h1_hh - report.profile.c_h_ah;
    mh.flag = report.profile.c_h_ah < report.profile.c_h1_hh - tolerance;
    return mh;
}

PureAvBaseline pure_av_baseline(const ModelParams& params, const SolverConfig& config) {
    ScalarOptimum opt = pure_av_optimum(params, config);
    PureAvBaseline b;
    b.c_a = opt.care;
    double tl = crash_loss(Scenario::AA, b.c_a, b.c_a, params);
    double tc = 2.0 * sensor_cost_av(b.c_a, 1.0, params);
    b.sc = params.w_l * tc + (1.0 - params.w_l) * tl;
    b.tr = crash_probability(Scenario::AA, b.c_a, b.c_a, params);
    return b;
}

namespace {

SweepRecord solve_point(double p, const KPolicy& policy, const ModelParams& params,
                        const SolverConfig& config, const NashResult& nash,
                        const PureAvBaseline& baseline) {
    double k = policy.k;
    if (policy.strategic)
        k = optimize_k_frank_wolfe(p, params, config).k_star;
    StackelbergResult eq = stackelberg_ah(k, p, params, config);
    CareProfile profile{nash.c_1, nash.c_2, eq.c_h_ah, eq.c_a, k};
    SolverDiagnostics diag;
    diag.nash_iterations = nash.iterations;
    diag.nash_residual = nash.residual;
    diag.follower_boundary = eq.follower_at_lower || eq.follower_at_upper;
    diag.leader_boundary = eq.leader_at_lower || eq.leader_at_upper;
    diag.leader_tie = eq.leader_tie;

    SweepRecord record;
    record.variable = "p";
    record.value = p;
    record.report = assemble_report(profile, p, params, diag);
    record.pure_av = baseline;
    record.moral_hazard = detect_moral_hazard(record.report, config.care_tolerance);
    record.k_star = k;
    return record;
}

}  // namespace

std::vector<SweepRecord> penetration_sweep(const std::vector<double>& p_grid,
                                           const KPolicy& policy,
                                           const ModelParams& params,
                                           const SolverConfig& config) {
    if (p_grid.empty()) throw std::invalid_argument("penetration_sweep: empty p grid");
    NashResult nash = nash_hh(params, config);
    PureAvBaseline baseline = pure_av_baseline(params, config);
    std::vector<SweepRecord> records;
    records.reserve(p_grid.size());
    for (double p : p_grid)
        records.push_back(solve_point(p, policy, params, config, nash, baseline));
    return records;
}

std::vector<SensitivityCurve> sensitivity_sweep(const std::string& parameter,
                                                const std::vector<double>& values,
                                                const std::vector<double>& p_grid,
                                                const KPolicy& policy,
                                                const ModelParams& params,
                                                const SolverConfig& config) {
    std::vector<SensitivityCurve> curves;
    for (double value : values) {
        ModelParams varied = params;
        if (parameter == "alpha") {
            varied.alpha = value;
            varied.c_a_max = 1.0 / value - kFeasEps;  // keep the bound below the pole
        } else if (parameter == "a") {
            varied.a = value;
        } else if (parameter == "h") {
            varied.h = value;
        } else if (parameter == "w_a_sen") {
            varied.w_a_sen = value;
        } else if (parameter == "w_a_loss") {
            varied.w_a_loss = value;
        } else {
            throw std::invalid_argument("sensitivity_sweep: unknown parameter '" +
                                        parameter + "'");
        }
        auto errors = validate(varied);
        if (!errors.empty())
            throw std::invalid_argument("sensitivity_sweep: value " +
                                        std::to_string(value) + " invalidates " +
                                        errors.front());
        SensitivityCurve curve;
        curve.parameter = parameter;
        curve.value = value;
        curve.records = penetration_sweep(p_grid, policy, varied, config);
        for (auto& record : curve.records) record.variable = parameter + ":p";
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<ExclusiveLaneRecord> exclusive_lane_sweep(const std::vector<double>& p_grid,
                                                      const ModelParams& params,
                                                      const SolverConfig& config) {
    std::vector<ExclusiveLaneRecord> records;
    records.reserve(p_grid.size());
    NashResult nash = nash_hh(params, config);
    for (double p : p_grid) {
        if (!(p > 0 && p <= 1))
            throw std::domain_error("exclusive_lane_sweep: p must be in (0,1]");
        Minimum1D m = minimize_scalar(
            [&](double c) { return cost_exclusive_av(c, p, params); },
            [&](double c) { return cost_exclusive_av_deriv(c, p, params); }, kFeasEps,
            params.c_a_max - kFeasEps, std::min(config.grid_resolution, 256),
            "exclusive_lane_sweep (reweighted AA objective)");
        ExclusiveLaneRecord rec;
        rec.p = p;
        rec.c_a = m.x;
        rec.c_h_hh = nash.c_1;
        EncounterProbs probs = encounter_probabilities(p);
        double l_aa = crash_loss(Scenario::AA, rec.c_a, rec.c_a, params);
        double l_hh = crash_loss(Scenario::HH, nash.c_1, nash.c_2, params);
        rec.tl = probs.aa * l_aa + probs.hh * l_hh;
        rec.tc = 2.0 * p * p * sensor_cost_av(rec.c_a, p, params) +
                 probs.hh * (precaution_cost_hv(nash.c_1, params) +
                             precaution_cost_hv(nash.c_2, params));
        rec.sc = params.w_l * rec.tc + (1.0 - params.w_l) * rec.tl;
        // crash rate over same-lane encounters only
        double z = probs.aa + probs.hh;
        rec.tr = (probs.aa * crash_probability(Scenario::AA, rec.c_a, rec.c_a, params) +
                  probs.hh * crash_probability(Scenario::HH, nash.c_1, nash.c_2, params)) /
                 z;
        records.push_back(rec);
    }
    return records;
}

std::vector<std::string> validate(const HeterogeneityConfig& config) {
    std::vector<std::string> errors;
    if (!(config.stddev >= 0)) errors.push_back("scenario.mc_stddev must be >= 0");
    if (!(config.lower >= 0 && config.upper <= 1 && config.lower < config.upper))
        errors.push_back("truncation interval must satisfy 0 <= lower < upper <= 1");
    if (!(config.mean > config.lower && config.mean < config.upper))
        errors.push_back("scenario.mc_mean must lie inside the truncation interval");
    if (config.samples < 1) errors.push_back("scenario.mc_samples must be >= 1");
    return errors;
}

std::vector<double> sample_truncated_normal(const HeterogeneityConfig& config) {
    auto errors = validate(config);
    if (!errors.empty())
        throw std::invalid_argument("sample_truncated_normal: " + errors.front());
    std::vector<double> samples(config.samples);
    if (config.stddev == 0.0) {
        std::fill(samples.begin(), samples.end(), config.mean);
        return samples;
    }
    for (int i = 0; i < config.samples; ++i) {
        std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(i));
        std::normal_distribution<double> normal(config.mean, config.stddev);
        double x;
        do {
            x = normal(rng);
        } while (!(x > config.lower && x < config.upper));
        samples[i] = x;
    }
    return samples;
}

MonteCarloResult heterogeneous_mc(const HeterogeneityConfig& mc_config,
                                  const std::vector<double>& p_grid, double k,
                                  const ModelParams& params, const SolverConfig& config) {
    MonteCarloResult result;
    result.w_h_samples = sample_truncated_normal(mc_config);
    const std::vector<double>& weights = result.w_h_samples;

    // Point mass: a single response reproduces the homogeneous path exactly.
    const bool degenerate = mc_config.stddev == 0.0;

    for (double p : p_grid) {
        if (!(p > 0 && p < 1))
            throw std::domain_error("heterogeneous_mc: p must be in (0,1)");
        double w_ah = 1.0 - params.w_a_sen - params.w_a_loss;

        auto expected_loss_share = [&](double c_a) {
            if (degenerate) {
                BestResponse br =
                    best_response_hv_ah_weighted(c_a, k, mc_config.mean, params, config);
                return av_loss_share_ah(c_a, br.care, k, params);
            }
            double sum = 0.0;
            for (double w : weights) {
                BestResponse br = best_response_hv_ah_weighted(c_a, k, w, params, config);
                sum += av_loss_share_ah(c_a, br.care, k, params);
            }
            return sum / static_cast<double>(weights.size());
        };
        auto leader_cost = [&](double c_a) {
            return params.w_a_sen * p * sensor_cost_av(c_a, p, params) +
                   params.w_a_loss * p * p * crash_loss(Scenario::AA, c_a, c_a, params) +
                   w_ah * 2.0 * p * (1.0 - p) * expected_loss_share(c_a);
        };

        MonteCarloPoint point;
        point.p = p;
        Minimum1D m = minimize_scalar_scan(leader_cost, kFeasEps,
                                           params.c_a_max - kFeasEps,
                                           config.grid_resolution);
        point.c_a = m.x;
        point.expected_loss_share = expected_loss_share(point.c_a);

        // homogeneous comparison at the mean weight
        ModelParams homo = params;
        homo.w_h = mc_config.mean;
        point.c_a_homogeneous = stackelberg_ah(k, p, homo, config).c_a;

        point.c_h_samples.reserve(weights.size());
        double sum = 0.0, sum_sq = 0.0;
        for (double w : weights) {
            BestResponse br = best_response_hv_ah_weighted(point.c_a, k, w, params, config);
            point.c_h_samples.push_back(br.care);
            sum += br.care;
            sum_sq += br.care * br.care;
        }
        double n = static_cast<double>(weights.size());
        point.c_h_mean = sum / n;
        point.c_h_stddev = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)))
                                 : 0.0;
        result.points.push_back(std::move(point));
    }
    return result;
}

double av_related_loss(double p, const KPolicy& policy, const ModelParams& params,
                       const SolverConfig& config, const NashResult* nash,
                       double* k_star_out) {
    double k = policy.k;
    if (policy.strategic) k = optimize_k_frank_wolfe(p, params, config).k_star;
    if (k_star_out != nullptr) *k_star_out = k;
    StackelbergResult eq = stackelberg_ah(k, p, params, config);
    (void)nash;
    return p * p * crash_loss(Scenario::AA, eq.c_a, eq.c_a, params) +
           2.0 * p * (1.0 - p) * crash_loss(Scenario::AH, eq.c_a, eq.c_h_ah, params);
}

EndogenousResult endogenous_fixed_points(double eta, const KPolicy& policy,
                                         const ModelParams& params,
                                         const SolverConfig& config,
                                         int p_scan_resolution) {
    if (!(eta >= 0)) throw std::domain_error("endogenous_fixed_points: eta must be >= 0");
    if (p_scan_resolution < 2)
        throw std::invalid_argument("endogenous_fixed_points: scan resolution too small");

    EndogenousResult result;
    result.eta = eta;
    NashResult nash = nash_hh(params, config);

    if (eta == 0.0) {
        // constraint degenerates to p = 1: the pure AV market
        FixedPoint fp;
        fp.p_star = 1.0;
        fp.residual = 0.0;
        fp.g_prime = 1.0;
        fp.stable = true;
        PureAvBaseline b = pure_av_baseline(params, config);
        CareProfile profile{nash.c_1, nash.c_2, nash.c_1, b.c_a, policy.k};
        fp.k_star = policy.k;
        fp.report = assemble_report(profile, 1.0, params);
        result.fixed_points.push_back(std::move(fp));
        return result;
    }

    auto g = [&](double p) {
        return p + eta * av_related_loss(p, policy, params, config, &nash) - 1.0;
    };

    const double lo = 1e-3, hi = 1.0 - 1e-3;
    double prev_p = lo;
    double prev_g = g(lo);
    for (int i = 1; i < p_scan_resolution; ++i) {
        double p = lo + i * (hi - lo) / (p_scan_resolution - 1);
        double cur_g = g(p);
        if ((prev_g < 0.0) != (cur_g < 0.0)) {
            double a = prev_p, b = p, ga = prev_g;
            while (b - a > 1e-4) {
                double mid = 0.5 * (a + b);
                double gm = g(mid);
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            FixedPoint fp;
            fp.p_star = 0.5 * (a + b);
            fp.residual = g(fp.p_star);
            double hp = 1e-3;
            fp.g_prime = (g(std::min(fp.p_star + hp, hi)) - g(std::max(fp.p_star - hp, lo))) /
                         (std::min(fp.p_star + hp, hi) - std::max(fp.p_star - hp, lo));
            fp.stable = fp.g_prime > 0.0;
            double k_star = policy.k;
            if (policy.strategic)
                k_star = optimize_k_frank_wolfe(fp.p_star, params, config).k_star;
            fp.k_star = k_star;
            StackelbergResult eq = stackelberg_ah(k_star, fp.p_star, params, config);
            CareProfile profile{nash.c_1, nash.c_2, eq.c_h_ah, eq.c_a, k_star};
            fp.report = assemble_report(profile, fp.p_star, params);
            result.fixed_points.push_back(std::move(fp));
        }
        prev_p = p;
        prev_g = cur_g;
    }
    return result;
}

}  // namespace liability
