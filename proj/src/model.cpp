#include "liability/model.hpp"

#include <vector>

namespace liability {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

// (x, y) coefficients of the crash-probability denominator per scenario.
void probability_coeffs(Scenario sc, const ModelParams& params, double& x, double& y) {
    switch (sc) {
        case Scenario::HH: x = params.h; y = params.h; break;
        case Scenario::AH: x = params.a; y = params.h; break;
        case Scenario::AA: x = params.a; y = params.a; break;
    }
}

// (u, v) slopes of the severity function per scenario.
void severity_coeffs(Scenario sc, const ModelParams& params, double& u, double& v) {
    switch (sc) {
        case Scenario::HH: u = params.t; v = params.t; break;
        case Scenario::AH: u = params.s; v = params.t; break;
        case Scenario::AA: u = params.s; v = params.s; break;
    }
}

}  // namespace

std::vector<std::string> validate(const ModelParams& params) {
    std::vector<std::string> errors;
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    check(params.alpha > 0, "alpha must be > 0");
    check(params.beta > 0, "beta must be > 0");
    check(params.a > 0, "a must be > 0");
    check(params.h > 0, "h must be > 0");
    check(params.M > 0, "M must be > 0");
    check(params.s > 0, "s must be > 0");
    check(params.t > 0, "t must be > 0");
    check(params.w_h > 0 && params.w_h < 1, "w_h must be in (0,1)");
    check(params.w_a_sen > 0, "w_a_sen must be > 0");
    check(params.w_a_loss > 0, "w_a_loss must be > 0");
    check(params.w_a_sen + params.w_a_loss < 1, "w_a_sen + w_a_loss must be < 1");
    check(params.w_l > 0 && params.w_l < 1, "w_l must be in (0,1)");
    if (params.beta > 0)
        check(params.c_h_max > 0 && params.c_h_max < 1.0 / params.beta,
              "c_h_max must be in (0, 1/beta)");
    if (params.alpha > 0)
        check(params.c_a_max > 0 && params.c_a_max < 1.0 / params.alpha,
              "c_a_max must be in (0, 1/alpha)");
    check(params.c_a_max >= params.c_h_max, "c_a_max must be >= c_h_max");
    check(params.k_max > 0, "k_max must be > 0");
    return errors;
}

EncounterProbs encounter_probabilities(double p) {
    require(p >= 0.0 && p <= 1.0, "penetration rate must be in [0,1]");
    return {(1.0 - p) * (1.0 - p), 2.0 * p * (1.0 - p), p * p};
}

double share(double c_i, double c_j, double sigma_i, double sigma_j) {
    require(c_i > 0 && c_j > 0 && sigma_i > 0 && sigma_j > 0,
            "share arguments must be strictly positive");
    return sigma_i * c_j / (sigma_i * c_j + sigma_j * c_i);
}

double share_hv_hh(double c_own, double c_other) {
    require(c_own > 0 && c_other > 0, "share arguments must be strictly positive");
    return c_other / (c_own + c_other);
}

double share_hv_ah(double c_h, double c_a, double k) {
    require(c_h > 0 && c_a > 0 && k > 0, "share arguments must be strictly positive");
    return k * c_a / (k * c_a + c_h);
}

double share_av_ah(double c_a, double c_h, double k) {
    require(c_h > 0 && c_a > 0 && k > 0, "share arguments must be strictly positive");
    return c_h / (k * c_a + c_h);
}

double crash_probability(Scenario sc, double c_1, double c_2, const ModelParams& params) {
    require(c_1 > 0 && c_2 > 0, "care levels must be strictly positive");
    double x, y;
    probability_coeffs(sc, params, x, y);
    return 1.0 / (x * c_1 + y * c_2 + 1.0);
}

double crash_severity(Scenario sc, double c_1, double c_2, const ModelParams& params) {
    require(c_1 > 0 && c_2 > 0, "care levels must be strictly positive");
    double u, v;
    severity_coeffs(sc, params, u, v);
    double raw = params.M - u * c_1 - v * c_2;
    return raw > 0.0 ? raw : 0.0;
}

bool severity_clamped(Scenario sc, double c_1, double c_2, const ModelParams& params) {
    double u, v;
    severity_coeffs(sc, params, u, v);
    return params.M - u * c_1 - v * c_2 <= 0.0;
}

double crash_loss(Scenario sc, double c_1, double c_2, const ModelParams& params) {
    return crash_probability(sc, c_1, c_2, params) * crash_severity(sc, c_1, c_2, params);
}

double precaution_cost_hv(double c_h, const ModelParams& params) {
    require(c_h >= 0, "care level must be nonnegative");
    require(c_h < 1.0 / params.beta, "HV care level at or beyond the cost pole 1/beta");
    return 1.0 / (1.0 - params.beta * c_h) - 1.0;
}

double precaution_cost_hv_deriv(double c_h, const ModelParams& params) {
    require(c_h >= 0 && c_h < 1.0 / params.beta, "HV care level outside [0, 1/beta)");
    double d = 1.0 - params.beta * c_h;
    return params.beta / (d * d);
}

double sensor_cost_av(double c_a, double p, const ModelParams& params) {
    require(p > 0.0 && p <= 1.0, "sensor cost needs a penetration rate in (0,1]");
    require(c_a >= 0, "care level must be nonnegative");
    require(c_a < 1.0 / params.alpha, "AV care level at or beyond the cost pole 1/alpha");
    return (1.0 / (1.0 - params.alpha * c_a) - 1.0) / std::sqrt(p);
}

double sensor_cost_av_deriv(double c_a, double p, const ModelParams& params) {
    require(p > 0.0 && p <= 1.0, "sensor cost needs a penetration rate in (0,1]");
    require(c_a >= 0 && c_a < 1.0 / params.alpha, "AV care level outside [0, 1/alpha)");
    double d = 1.0 - params.alpha * c_a;
    return params.alpha / (d * d) / std::sqrt(p);
}

double cost_hv_hh(double c_own, double c_other, const ModelParams& params) {
    return params.w_h * precaution_cost_hv(c_own, params) +
           (1.0 - params.w_h) * crash_loss(Scenario::HH, c_own, c_other, params) *
               share_hv_hh(c_own, c_other);
}

double cost_hv_hh_deriv_own(double c_own, double c_other, const ModelParams& params) {
    double d = params.w_h * precaution_cost_hv_deriv(c_own, params);
    double raw_T = params.M - params.t * (c_own + c_other);
    if (raw_T <= 0.0) return d;  // loss clamped; only the precaution term moves
    double D = params.h * (c_own + c_other) + 1.0;
    double P = 1.0 / D;
    double sh = c_other / (c_own + c_other);
    double dP = -params.h / (D * D);
    double dT = -params.t;
    double dsh = -c_other / ((c_own + c_other) * (c_own + c_other));
    d += (1.0 - params.w_h) * (dP * raw_T * sh + P * dT * sh + P * raw_T * dsh);
    return d;
}

double cost_hv_ah(double c_h, double c_a, double k, const ModelParams& params) {
    return params.w_h * precaution_cost_hv(c_h, params) +
           (1.0 - params.w_h) * crash_loss(Scenario::AH, c_a, c_h, params) *
               share_hv_ah(c_h, c_a, k);
}

double cost_hv_ah_deriv_ch(double c_h, double c_a, double k, const ModelParams& params) {
    double d = params.w_h * precaution_cost_hv_deriv(c_h, params);
    double raw_T = params.M - params.s * c_a - params.t * c_h;
    if (raw_T <= 0.0) return d;
    double D = params.a * c_a + params.h * c_h + 1.0;
    double G = k * c_a + c_h;
    double P = 1.0 / D;
    double sh = k * c_a / G;
    double dP = -params.h / (D * D);
    double dT = -params.t;
    double dsh = -k * c_a / (G * G);
    d += (1.0 - params.w_h) * (dP * raw_T * sh + P * dT * sh + P * raw_T * dsh);
    return d;
}

double av_loss_share_ah(double c_a, double c_h, double k, const ModelParams& params) {
    return crash_loss(Scenario::AH, c_a, c_h, params) * share_av_ah(c_a, c_h, k);
}

double cost_manufacturer(double c_a, double c_h_ah, double k, double p,
                         const ModelParams& params) {
    require(p > 0.0 && p <= 1.0,
            "manufacturer cost undefined outside the market (p must be in (0,1])");
    double w_ah = 1.0 - params.w_a_sen - params.w_a_loss;
    double cost = params.w_a_sen * p * sensor_cost_av(c_a, p, params) +
                  params.w_a_loss * p * p * crash_loss(Scenario::AA, c_a, c_a, params);
    if (p < 1.0)
        cost += w_ah * 2.0 * p * (1.0 - p) * av_loss_share_ah(c_a, c_h_ah, k, params);
    return cost;
}

double cost_pure_av(double c_a, const ModelParams& params) {
    return params.w_a_sen * sensor_cost_av(c_a, 1.0, params) +
           params.w_a_loss * crash_loss(Scenario::AA, c_a, c_a, params);
}

double cost_pure_av_deriv(double c_a, const ModelParams& params) {
    double d = params.w_a_sen * sensor_cost_av_deriv(c_a, 1.0, params);
    double raw_T = params.M - 2.0 * params.s * c_a;
    if (raw_T > 0.0) {
        double D = 2.0 * params.a * c_a + 1.0;
        d += params.w_a_loss *
             (-2.0 * params.a / (D * D) * raw_T + (1.0 / D) * (-2.0 * params.s));
    }
    return d;
}

double cost_exclusive_av(double c_a, double p, const ModelParams& params) {
    require(p > 0.0 && p <= 1.0, "exclusive-lane cost needs p in (0,1]");
    double aa_weight = p * p / (p * p + (1.0 - p) * (1.0 - p));
    return params.w_a_sen * p * sensor_cost_av(c_a, p, params) +
           params.w_a_loss * aa_weight * crash_loss(Scenario::AA, c_a, c_a, params);
}

double cost_exclusive_av_deriv(double c_a, double p, const ModelParams& params) {
    double aa_weight = p * p / (p * p + (1.0 - p) * (1.0 - p));
    double d = params.w_a_sen * p * sensor_cost_av_deriv(c_a, p, params);
    double raw_T = params.M - 2.0 * params.s * c_a;
    if (raw_T > 0.0) {
        double D = 2.0 * params.a * c_a + 1.0;
        d += params.w_a_loss * aa_weight *
             (-2.0 * params.a / (D * D) * raw_T + (1.0 / D) * (-2.0 * params.s));
    }
    return d;
}

double total_loss(const CareProfile& profile, double p, const ModelParams& params) {
    EncounterProbs probs = encounter_probabilities(p);
    double tl = 0.0;
    if (probs.aa > 0)
        tl += probs.aa * crash_loss(Scenario::AA, profile.c_a, profile.c_a, params);
    if (probs.ah > 0)
        tl += probs.ah * crash_loss(Scenario::AH, profile.c_a, profile.c_h_ah, params);
    if (probs.hh > 0)
        tl += probs.hh * crash_loss(Scenario::HH, profile.c_h1_hh, profile.c_h2_hh, params);
    return tl;
}

double total_precaution_cost(const CareProfile& profile, double p,
                             const ModelParams& params) {
    EncounterProbs probs = encounter_probabilities(p);
    double tc = 0.0;
    if (p > 0.0) {
        double s_a = sensor_cost_av(profile.c_a, p, params);
        tc += 2.0 * p * p * s_a;
        if (probs.ah > 0)
            tc += probs.ah * (s_a + precaution_cost_hv(profile.c_h_ah, params));
    }
    if (probs.hh > 0)
        tc += probs.hh * (precaution_cost_hv(profile.c_h1_hh, params) +
                          precaution_cost_hv(profile.c_h2_hh, params));
    return tc;
}

double social_cost(const CareProfile& profile, double p, const ModelParams& params) {
    return params.w_l * total_precaution_cost(profile, p, params) +
           (1.0 - params.w_l) * total_loss(profile, p, params);
}

CrashRates crash_rates(const CareProfile& profile, double p, const ModelParams& params) {
    EncounterProbs probs = encounter_probabilities(p);
    CrashRates rates;
    if (probs.hh > 0)
        rates.hh = probs.hh *
                   crash_probability(Scenario::HH, profile.c_h1_hh, profile.c_h2_hh, params);
    if (probs.ah > 0)
        rates.ah = probs.ah *
                   crash_probability(Scenario::AH, profile.c_a, profile.c_h_ah, params);
    if (probs.aa > 0)
        rates.aa = probs.aa *
                   crash_probability(Scenario::AA, profile.c_a, profile.c_a, params);
    rates.total = rates.hh + rates.ah + rates.aa;
    return rates;
}

EquilibriumReport assemble_report(const CareProfile& profile, double p,
                                  const ModelParams& params,
                                  const SolverDiagnostics& diagnostics) {
    EquilibriumReport report;
    report.profile = profile;
    report.p = p;
    report.diagnostics = diagnostics;

    EncounterProbs probs = encounter_probabilities(p);
    auto fill = [&](ScenarioMeasures& m, Scenario sc, double c1, double c2, double weight) {
        m.encounter_probability = weight;
        if (weight <= 0.0) return;
        m.crash_probability = crash_probability(sc, c1, c2, params);
        m.crash_severity = crash_severity(sc, c1, c2, params);
        m.crash_loss = m.crash_probability * m.crash_severity;
        m.crash_rate = weight * m.crash_probability;
        m.severity_clamped = severity_clamped(sc, c1, c2, params);
    };
    fill(report.hh, Scenario::HH, profile.c_h1_hh, profile.c_h2_hh, probs.hh);
    fill(report.ah, Scenario::AH, profile.c_a, profile.c_h_ah, probs.ah);
    fill(report.aa, Scenario::AA, profile.c_a, profile.c_a, probs.aa);

    report.tl = total_loss(profile, p, params);
    report.tc = total_precaution_cost(profile, p, params);
    report.sc = params.w_l * report.tc + (1.0 - params.w_l) * report.tl;
    report.tr = report.hh.crash_rate + report.ah.crash_rate + report.aa.crash_rate;
    report.diagnostics.any_severity_clamped =
        report.hh.severity_clamped || report.ah.severity_clamped || report.aa.severity_clamped;
    return report;
}

}  // namespace liability
