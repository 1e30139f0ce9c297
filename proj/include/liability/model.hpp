// Core model of the AV/HV liability game: domain types and the closed-form
// share, crash, cost and welfare functions. Everything here is a pure
// function of its arguments; solvers and sweeps live in equilibrium.hpp,
// hierarchy.hpp and scenarios.hpp.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace liability {

inline constexpr double kFeasEps = 1e-6;  // margin kept from open-set endpoints

enum class Scenario { HH, AH, AA };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::HH: return "HH";
        case Scenario::AH: return "AH";
        case Scenario::AA: return "AA";
    }
    return "?";
}

// All exogenous coefficients. Defaults are the base configuration used for
// the numerical experiments (alpha=0.4, beta=0.5, a=h=10, M=20, s=t=5,
// w_l=0.16, w_a=[0.125,0.25], w_h=0.5) with care bounds a shade below the
// cost-function poles 1/beta and 1/alpha.
struct ModelParams {
    double alpha = 0.4;    // sensor-cost curvature
    double beta = 0.5;     // human precaution-cost curvature
    double a = 10.0;       // AV crash-probability environment coefficient
    double h = 10.0;       // HV crash-probability environment coefficient
    double M = 20.0;       // maximum crash severity
    double s = 5.0;        // AV severity-reduction slope
    double t = 5.0;        // HV severity-reduction slope
    double w_h = 0.5;      // human trade-off weight, in (0,1)
    double w_a_sen = 0.125;  // manufacturer sensor-cost weight
    double w_a_loss = 0.25;  // manufacturer AA-loss weight
    double w_l = 0.16;     // lawmaker precaution weight, in (0,1)
    double c_h_max = 2.0 - kFeasEps;  // upper bound of HV care, < 1/beta
    double c_a_max = 2.5 - kFeasEps;  // upper bound of AV care, < 1/alpha
    double k_max = 10.0;   // upper bound of the liability ratio

    // Derives the default care bounds from the poles of the cost functions.
    void derive_bounds() {
        c_h_max = 1.0 / beta - kFeasEps;
        c_a_max = 1.0 / alpha - kFeasEps;
    }
};

// Returns one message per violated ModelParams invariant; empty means valid.
std::vector<std::string> validate(const ModelParams& params);

struct LiabilityRule {
    double k = 1.0;  // ratio sigma_H / sigma_A, in (0, k_max]
};

struct Market {
    double p = 0.5;     // AV penetration rate, in [0,1]
    double eta = 0.0;   // endogenous sensitivity, >= 0; 0 means exogenous p
};

// The five equilibrium care levels plus the liability ratio they were
// solved under.
struct CareProfile {
    double c_h1_hh = 0.0;
    double c_h2_hh = 0.0;
    double c_h_ah = 0.0;
    double c_a = 0.0;
    double k = 1.0;
};

struct EncounterProbs {
    double hh = 0.0, ah = 0.0, aa = 0.0;
};

// ((1-p)^2, 2p(1-p), p^2); components sum to one.
EncounterProbs encounter_probabilities(double p);

// Comparative-negligence share of player i: sigma_i c_i^{-1} /
// (sigma_i c_i^{-1} + sigma_j c_j^{-1}), evaluated in the overflow-safe
// form sigma_i c_j / (sigma_i c_j + sigma_j c_i).
double share(double c_i, double c_j, double sigma_i, double sigma_j);

// Scenario-specialized shares. In HH the standards cancel; in AA both AVs
// carry the same standard so the share is exactly 1/2; in AH only the
// ratio k = sigma_H/sigma_A matters.
double share_hv_hh(double c_own, double c_other);
double share_hv_ah(double c_h, double c_a, double k);
double share_av_ah(double c_a, double c_h, double k);
constexpr double share_av_aa() { return 0.5; }

// Crash probability (x c_1 + y c_2 + 1)^{-1} with (x,y) = (h,h), (a,h),
// (a,a) for HH, AH, AA. For AH, c_1 is the AV care level.
double crash_probability(Scenario sc, double c_1, double c_2, const ModelParams& params);

// Crash severity max(0, M - u c_1 - v c_2) with (u,v) = (t,t), (s,t), (s,s).
// Negative raw severity is clamped to zero; severity_clamped reports it.
double crash_severity(Scenario sc, double c_1, double c_2, const ModelParams& params);
bool severity_clamped(Scenario sc, double c_1, double c_2, const ModelParams& params);

// Expected loss L = P * T.
double crash_loss(Scenario sc, double c_1, double c_2, const ModelParams& params);

// HV precaution cost -(beta c - 1)^{-1} - 1; zero at zero care, pole at 1/beta.
double precaution_cost_hv(double c_h, const ModelParams& params);
double precaution_cost_hv_deriv(double c_h, const ModelParams& params);

// AV sensor cost ((1 - alpha c)^{-1} - 1) p^{-1/2}; the p factor is the
// mass-production scaling, so the same sensors are cheaper in a larger fleet.
double sensor_cost_av(double c_a, double p, const ModelParams& params);
double sensor_cost_av_deriv(double c_a, double p, const ModelParams& params);

// Player disutilities.
double cost_hv_hh(double c_own, double c_other, const ModelParams& params);
double cost_hv_hh_deriv_own(double c_own, double c_other, const ModelParams& params);

double cost_hv_ah(double c_h, double c_a, double k, const ModelParams& params);
double cost_hv_ah_deriv_ch(double c_h, double c_a, double k, const ModelParams& params);

// AV loss share in the AH scenario, L^AH * s_A; the term the manufacturer
// averages over drivers when humans are heterogeneous.
double av_loss_share_ah(double c_a, double c_h, double k, const ModelParams& params);

// Manufacturer cost w_sen p S_A + w_loss p^2 L^AA + (1-w_sen-w_loss)
// 2p(1-p) L^AH s_A. Undefined at p = 0 (no market).
double cost_manufacturer(double c_a, double c_h_ah, double k, double p,
                         const ModelParams& params);

// Pure-AV (p=1) manufacturer objective w_sen S_A(c,1) + w_loss L^AA(c,c).
double cost_pure_av(double c_a, const ModelParams& params);
double cost_pure_av_deriv(double c_a, const ModelParams& params);

// Exclusive-lane manufacturer objective: AH encounters removed, AA loss
// reweighted by p^2/(p^2+(1-p)^2).
double cost_exclusive_av(double c_a, double p, const ModelParams& params);
double cost_exclusive_av_deriv(double c_a, double p, const ModelParams& params);

// Social aggregates over the care profile. AV terms are skipped at p=0,
// where the sensor cost (and the manufacturer) is undefined.
double total_loss(const CareProfile& profile, double p, const ModelParams& params);
double total_precaution_cost(const CareProfile& profile, double p, const ModelParams& params);
double social_cost(const CareProfile& profile, double p, const ModelParams& params);

struct CrashRates {
    double hh = 0.0, ah = 0.0, aa = 0.0;
    double total = 0.0;
};
CrashRates crash_rates(const CareProfile& profile, double p, const ModelParams& params);

// Per-scenario measures plus the aggregates, as reported by solvers and sweeps.
struct ScenarioMeasures {
    double encounter_probability = 0.0;
    double crash_probability = 0.0;
    double crash_severity = 0.0;
    double crash_loss = 0.0;
    double crash_rate = 0.0;
    bool severity_clamped = false;
};

struct SolverDiagnostics {
    int nash_iterations = 0;
    double nash_residual = 0.0;
    int leader_evaluations = 0;
    bool follower_boundary = false;
    bool leader_boundary = false;
    bool leader_tie = false;
    bool any_severity_clamped = false;
};

struct EquilibriumReport {
    CareProfile profile;
    double p = 0.0;
    ScenarioMeasures hh, ah, aa;
    double tl = 0.0;  // total crash loss
    double tc = 0.0;  // total precaution cost
    double sc = 0.0;  // social cost
    double tr = 0.0;  // total crash rate
    SolverDiagnostics diagnostics;
};

// Evaluates every measure at the given profile; pure, no solving.
EquilibriumReport assemble_report(const CareProfile& profile, double p,
                                  const ModelParams& params,
                                  const SolverDiagnostics& diagnostics = {});

}  // namespace liability
