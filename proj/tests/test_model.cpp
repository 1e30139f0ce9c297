#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "liability/model.hpp"

using namespace liability;

namespace {

ModelParams base() { return ModelParams{}; }

double fd_central(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("encounter probabilities at the boundaries and midpoint") {
    auto p0 = encounter_probabilities(0.0);
    CHECK(p0.hh == 1.0);
    CHECK(p0.ah == 0.0);
    CHECK(p0.aa == 0.0);
    auto p1 = encounter_probabilities(1.0);
    CHECK(p1.hh == 0.0);
    CHECK(p1.aa == 1.0);
    auto ph = encounter_probabilities(0.5);
    CHECK(ph.hh == doctest::Approx(0.25));
    CHECK(ph.ah == doctest::Approx(0.5));
    CHECK(ph.aa == doctest::Approx(0.25));
    CHECK_THROWS_AS(encounter_probabilities(-0.01), std::domain_error);
    CHECK_THROWS_AS(encounter_probabilities(1.01), std::domain_error);
}

TEST_CASE("encounter probabilities form a distribution for any p") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        auto probs = encounter_probabilities(unit(rng));
        CHECK(probs.hh >= 0.0);
        CHECK(probs.ah >= 0.0);
        CHECK(probs.aa >= 0.0);
        CHECK(probs.hh + probs.ah + probs.aa == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("share function values") {
    CHECK(share(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(share(1.0, 2.0, 1.0, 1.0) == doctest::Approx(2.0 / 3.0));
    // sigma_H = 2, sigma_A = 1: the HV bears two thirds
    CHECK(share(1.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(share_hv_ah(1.0, 1.0, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(share(0.0, 1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(share(1.0, -1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(share(1.0, 1.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("share complementarity and monotonicity on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> care(0.01, 3.0);
    std::uniform_real_distribution<double> standard(0.05, 5.0);
    for (int i = 0; i < 2000; ++i) {
        double c_i = care(rng), c_j = care(rng);
        double s_i = standard(rng), s_j = standard(rng);
        double sh = share(c_i, c_j, s_i, s_j);
        CHECK(sh > 0.0);
        CHECK(sh < 1.0);
        CHECK(sh + share(c_j, c_i, s_j, s_i) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(share(c_i * 1.05, c_j, s_i, s_j) < sh);   // own care lowers the share
        CHECK(share(c_i, c_j * 1.05, s_i, s_j) > sh);   // opponent care raises it
        CHECK(share(c_i, c_j, s_i * 1.05, s_j) > sh);   // own standard raises it
    }
}

TEST_CASE("AA share is one half regardless of care and standards") {
    CHECK(share_av_aa() == 0.5);
    CHECK(share(1.7, 1.7, 3.0, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("share is invariant to scaling both standards") {
    // only the ratio k = sigma_H / sigma_A matters
    for (double scale : {0.5, 2.0, 7.0}) {
        CHECK(share(0.8, 1.4, 1.3 * scale, 1.0 * scale) ==
              doctest::Approx(share(0.8, 1.4, 1.3, 1.0)).epsilon(1e-15));
    }
}

TEST_CASE("crash probability per scenario") {
    ModelParams params = base();
    CHECK(crash_probability(Scenario::AA, 1.0, 1.0, params) == doctest::Approx(1.0 / 21.0));
    CHECK(crash_probability(Scenario::AH, 1.0, 0.5, params) == doctest::Approx(1.0 / 16.0));
    double low = crash_probability(Scenario::HH, params.c_h_max, params.c_h_max, params);
    double high = crash_probability(Scenario::HH, 1e-6, 1e-6, params);
    CHECK(low < high);
    CHECK_THROWS_AS(crash_probability(Scenario::HH, 0.0, 1.0, params), std::domain_error);
}

TEST_CASE("crash probability decreases in each care argument") {
    ModelParams params = base();
    for (double c1 : {0.1, 0.5, 1.0, 1.8}) {
        for (double c2 : {0.1, 0.5, 1.0, 1.8}) {
            for (auto sc : {Scenario::HH, Scenario::AH, Scenario::AA}) {
                double p = crash_probability(sc, c1, c2, params);
                CHECK(crash_probability(sc, c1 + 0.05, c2, params) < p);
                CHECK(crash_probability(sc, c1, c2 + 0.05, params) < p);
                CHECK(p > 0.0);
                CHECK(p < 1.0);
            }
        }
    }
}

TEST_CASE("crash severity with clamping") {
    ModelParams params = base();
    CHECK(crash_severity(Scenario::AA, 1.0, 1.0, params) == doctest::Approx(10.0));
    // raw severity 20 - 12.5 - 10 = -2.5 clamps to zero and is flagged
    CHECK(crash_severity(Scenario::AH, 2.5, 2.0, params) == 0.0);
    CHECK(severity_clamped(Scenario::AH, 2.5, 2.0, params));
    CHECK_FALSE(severity_clamped(Scenario::AA, 1.0, 1.0, params));
    CHECK(crash_severity(Scenario::HH, 1e-9, 1e-9, params) == doctest::Approx(params.M));
}

TEST_CASE("pre-clamp severity decreases in care") {
    ModelParams params = base();
    for (double c : {0.2, 0.6, 1.0}) {
        double t0 = crash_severity(Scenario::AH, c, c, params);
        CHECK(crash_severity(Scenario::AH, c + 0.1, c, params) < t0);
        CHECK(crash_severity(Scenario::AH, c, c + 0.1, params) < t0);
    }
}

TEST_CASE("crash loss is the product of probability and severity") {
    ModelParams params = base();
    CHECK(crash_loss(Scenario::AA, 1.0, 1.0, params) == doctest::Approx(10.0 / 21.0));
    CHECK(crash_loss(Scenario::HH, 1.0, 1.0, params) == doctest::Approx(10.0 / 21.0));
    CHECK(crash_loss(Scenario::AH, 2.5, 2.0, params) == 0.0);
}

TEST_CASE("HV precaution cost values, pole, monotonicity") {
    ModelParams params = base();
    CHECK(precaution_cost_hv(1e-12, params) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(precaution_cost_hv(1.0, params) == doctest::Approx(1.0));
    CHECK(precaution_cost_hv(1.8, params) == doctest::Approx(9.0));
    CHECK_THROWS_AS(precaution_cost_hv(2.0, params), std::domain_error);
    CHECK_THROWS_AS(precaution_cost_hv(-0.1, params), std::domain_error);
    double prev = 0.0;
    for (double c = 0.1; c < 1.99; c += 0.1) {
        double v = precaution_cost_hv(c, params);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("AV sensor cost values and scaling in p") {
    ModelParams params = base();
    CHECK(sensor_cost_av(1.0, 1.0, params) == doctest::Approx(2.0 / 3.0));
    CHECK(sensor_cost_av(1.0, 0.25, params) == doctest::Approx(4.0 / 3.0));
    CHECK(sensor_cost_av(1e-12, 1.0, params) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(sensor_cost_av(2.5, 1.0, params), std::domain_error);
    CHECK_THROWS_AS(sensor_cost_av(1.0, 0.0, params), std::domain_error);
    CHECK(sensor_cost_av(1.0, 0.8, params) > sensor_cost_av(1.0, 0.9, params));
    CHECK(sensor_cost_av(1.2, 0.5, params) > sensor_cost_av(1.0, 0.5, params));
}

TEST_CASE("slope dominance: human care is costlier at the margin than sensors") {
    ModelParams params = base();
    for (double c = 0.05; c < params.c_h_max; c += 0.05) {
        double sh = (precaution_cost_hv(c + 1e-6, params) -
                     precaution_cost_hv(c - 1e-6, params)) / 2e-6;
        double sa = (sensor_cost_av(c + 1e-6, 1.0, params) -
                     sensor_cost_av(c - 1e-6, 1.0, params)) / 2e-6;
        CHECK(sh > sa);
    }
}

TEST_CASE("HH player cost: value, share limit, symmetry") {
    ModelParams params = base();
    CHECK(cost_hv_hh(1.0, 1.0, params) ==
          doctest::Approx(0.5 + 0.5 * (10.0 / 21.0) * 0.5));
    // a vanishing own care level concentrates the whole loss on player 1
    CHECK(share_hv_hh(1e-9, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    for (double c : {0.3, 0.9, 1.5})
        CHECK(cost_hv_hh(c, c, params) == cost_hv_hh(c, c, params));
}

TEST_CASE("AH human cost: value, k limit, monotone in k") {
    ModelParams params = base();
    CHECK(cost_hv_ah(1.0, 1.0, 1.0, params) ==
          doctest::Approx(0.5 + 0.5 * (10.0 / 21.0) * 0.5));
    double bare = params.w_h * precaution_cost_hv(0.7, params);
    CHECK(cost_hv_ah(0.7, 1.2, 1e-9, params) == doctest::Approx(bare).epsilon(1e-6));
    double prev = cost_hv_ah(0.7, 1.2, 0.1, params);
    for (double k : {0.5, 1.0, 2.0, 5.0}) {
        double v = cost_hv_ah(0.7, 1.2, k, params);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("manufacturer cost composes its three terms") {
    ModelParams params = base();
    double p = 0.5, k = 1.0, c_a = 1.0, c_h = 1.0;
    // independent term-by-term evaluation
    double sensor = params.w_a_sen * p * sensor_cost_av(c_a, p, params);
    double aa = params.w_a_loss * p * p * crash_loss(Scenario::AA, c_a, c_a, params);
    double ah = (1.0 - params.w_a_sen - params.w_a_loss) * 2.0 * p * (1.0 - p) *
                crash_loss(Scenario::AH, c_a, c_h, params) * share_av_ah(c_a, c_h, k);
    CHECK(cost_manufacturer(c_a, c_h, k, p, params) ==
          doctest::Approx(sensor + aa + ah).epsilon(1e-14));

    // at p=1 the AH term vanishes and the monopoly objective remains
    CHECK(cost_manufacturer(1.0, 0.5, 1.0, 1.0, params) ==
          doctest::Approx(cost_pure_av(1.0, params)).epsilon(1e-14));

    // raising c_a with everything else fixed raises the sensor term
    CHECK(sensor_cost_av(1.2, p, params) > sensor_cost_av(1.0, p, params));

    CHECK_THROWS_AS(cost_manufacturer(1.0, 1.0, 1.0, 0.0, params), std::domain_error);
}

TEST_CASE("total loss at the boundaries and under symmetric parameters") {
    ModelParams params = base();
    CareProfile profile{0.8, 0.8, 0.6, 1.1, 1.0};
    CHECK(total_loss(profile, 0.0, params) ==
          doctest::Approx(crash_loss(Scenario::HH, 0.8, 0.8, params)));
    CHECK(total_loss(profile, 1.0, params) ==
          doctest::Approx(crash_loss(Scenario::AA, 1.1, 1.1, params)));
    // equal cares everywhere with a=h, s=t: every scenario's loss is the same
    CareProfile same{0.9, 0.9, 0.9, 0.9, 1.0};
    double l = crash_loss(Scenario::HH, 0.9, 0.9, params);
    CHECK(total_loss(same, 0.5, params) == doctest::Approx(l).epsilon(1e-12));
}

TEST_CASE("total precaution cost boundaries") {
    ModelParams params = base();
    CareProfile profile{0.8, 0.7, 0.6, 1.1, 1.0};
    CHECK(total_precaution_cost(profile, 0.0, params) ==
          doctest::Approx(precaution_cost_hv(0.8, params) +
                          precaution_cost_hv(0.7, params)));
    CHECK(total_precaution_cost(profile, 1.0, params) ==
          doctest::Approx(2.0 * sensor_cost_av(1.1, 1.0, params)));
    CareProfile tiny{1e-9, 1e-9, 1e-9, 1e-9, 1.0};
    CHECK(total_precaution_cost(tiny, 0.5, params) ==
          doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("social cost weight degeneracies and composition") {
    ModelParams params = base();
    CareProfile profile{1.0, 1.0, 1.0, 1.0, 1.0};
    ModelParams w0 = params;
    w0.w_l = 0.0;
    CHECK(social_cost(profile, 0.5, w0) == doctest::Approx(total_loss(profile, 0.5, w0)));
    ModelParams w1 = params;
    w1.w_l = 1.0;
    CHECK(social_cost(profile, 0.5, w1) ==
          doctest::Approx(total_precaution_cost(profile, 0.5, w1)));
    CHECK(social_cost(profile, 0.5, params) ==
          doctest::Approx(params.w_l * total_precaution_cost(profile, 0.5, params) +
                          (1 - params.w_l) * total_loss(profile, 0.5, params))
              .epsilon(1e-14));
}

TEST_CASE("crash rates decompose and stay within probability bounds") {
    ModelParams params = base();
    CareProfile profile{0.8, 0.8, 0.5, 1.2, 1.0};
    auto r0 = crash_rates(profile, 0.0, params);
    CHECK(r0.total == doctest::Approx(crash_probability(Scenario::HH, 0.8, 0.8, params)));
    auto r1 = crash_rates(profile, 1.0, params);
    CHECK(r1.total == doctest::Approx(crash_probability(Scenario::AA, 1.2, 1.2, params)));
    for (double p : {0.1, 0.35, 0.5, 0.77, 0.95}) {
        auto r = crash_rates(profile, p, params);
        for (double component : {r.hh, r.ah, r.aa}) {
            CHECK(component >= 0.0);
            CHECK(component <= 1.0);
        }
        CHECK(r.total == doctest::Approx(r.hh + r.ah + r.aa).epsilon(1e-14));
        CHECK(r.total <= 1.0);
    }
}

TEST_CASE("assembled report keeps its accounting identities") {
    ModelParams params = base();
    CareProfile profile{0.61, 0.61, 0.42, 1.23, 1.0};
    for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        EquilibriumReport report = assemble_report(profile, p, params);
        double prob_sum = report.hh.encounter_probability +
                          report.ah.encounter_probability +
                          report.aa.encounter_probability;
        CHECK(prob_sum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(report.tr ==
              doctest::Approx(report.hh.crash_rate + report.ah.crash_rate +
                              report.aa.crash_rate)
                  .epsilon(1e-14));
        CHECK(report.sc ==
              doctest::Approx(params.w_l * report.tc + (1 - params.w_l) * report.tl)
                  .epsilon(1e-13));
    }
}

TEST_CASE("operations are pure: identical inputs give identical outputs") {
    ModelParams params = base();
    CHECK(cost_manufacturer(1.1, 0.6, 1.3, 0.4, params) ==
          cost_manufacturer(1.1, 0.6, 1.3, 0.4, params));
    CHECK(cost_hv_ah(0.5, 1.2, 0.7, params) == cost_hv_ah(0.5, 1.2, 0.7, params));
    CareProfile profile{0.6, 0.6, 0.45, 1.2, 1.0};
    CHECK(social_cost(profile, 0.37, params) == social_cost(profile, 0.37, params));
}

TEST_CASE("analytic derivatives match central differences") {
    ModelParams params = base();
    auto rel_err = [](double a, double b) {
        return std::abs(a - b) / std::max(1.0, std::abs(b));
    };
    for (double c : {0.2, 0.7, 1.2, 1.7}) {
        CHECK(rel_err(precaution_cost_hv_deriv(c, params),
                      fd_central([&](double x) { return precaution_cost_hv(x, params); },
                                 c, 1e-6)) < 1e-4);
        CHECK(rel_err(sensor_cost_av_deriv(c, 0.6, params),
                      fd_central([&](double x) { return sensor_cost_av(x, 0.6, params); },
                                 c, 1e-6)) < 1e-4);
        CHECK(rel_err(cost_hv_hh_deriv_own(c, 0.8, params),
                      fd_central([&](double x) { return cost_hv_hh(x, 0.8, params); }, c,
                                 1e-6)) < 1e-4);
        CHECK(rel_err(cost_hv_ah_deriv_ch(c, 1.1, 1.3, params),
                      fd_central([&](double x) { return cost_hv_ah(x, 1.1, 1.3, params); },
                                 c, 1e-6)) < 1e-4);
        CHECK(rel_err(cost_pure_av_deriv(c, params),
                      fd_central([&](double x) { return cost_pure_av(x, params); }, c,
                                 1e-6)) < 1e-4);
        CHECK(rel_err(cost_exclusive_av_deriv(c, 0.4, params),
                      fd_central(
                          [&](double x) { return cost_exclusive_av(x, 0.4, params); }, c,
                          1e-6)) < 1e-4);
    }
}

TEST_CASE("parameter validation reports violated invariants") {
    ModelParams params = base();
    CHECK(validate(params).empty());

    ModelParams bad = base();
    bad.w_h = 1.5;
    auto errors = validate(bad);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("w_h") != std::string::npos);

    bad = base();
    bad.alpha = -1.0;
    CHECK_FALSE(validate(bad).empty());

    bad = base();
    bad.w_a_sen = 0.7;
    bad.w_a_loss = 0.4;  // sum >= 1
    CHECK_FALSE(validate(bad).empty());

    bad = base();
    bad.c_h_max = 2.6;  // beyond the HV cost pole
    CHECK_FALSE(validate(bad).empty());

    bad = base();
    bad.c_a_max = 1.0;  // below c_h_max
    CHECK_FALSE(validate(bad).empty());
}
