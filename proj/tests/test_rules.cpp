#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <scorecast/rng.hpp>
#include <scorecast/rules.hpp>

#include <cmath>
#include <limits>
#include <vector>

using namespace scorecast;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Expected score of forecasting q when the truth is p, for a binary rule.
double expected_score(const std::function<double(double, int)>& rule, double p, double q) {
    return p * rule(q, 1) + (1.0 - p) * rule(q, 0);
}

/// Argmax of the expected score over the grid q = step, 2 step, ..., 1-step.
double grid_argmax(const std::function<double(double, int)>& rule, double p, double step) {
    double best_q = step;
    double best = -kInf;
    for (double q = step; q < 1.0 - step / 2; q += step) {
        const double value = expected_score(rule, p, q);
        if (value > best) {
            best = value;
            best_q = q;
        }
    }
    return best_q;
}

}  // namespace

TEST_CASE("forecast validation and renormalization") {
    CHECK_THROWS_AS(Forecast({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Forecast({0.5, 0.3}), std::invalid_argument);       // sums to 0.8
    CHECK_THROWS_AS(Forecast({1.2, -0.2, 0.0}), std::invalid_argument); // entries outside [0,1]

    // Entries near enough to a unit sum are snapped exactly.
    const double third = 0.3333333333333333;
    Forecast thirds({third, third, third});
    CHECK(thirds.probs().sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(thirds[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const Forecast uniform = Forecast::uniform(4);
    CHECK(uniform.categories() == 4);
    CHECK(uniform[3] == 0.25);
}

TEST_CASE("brier score on the six classic forecasts") {
    const Outcome win{0};
    CHECK(brier_score(Forecast({1.0, 0.0, 0.0}), win) == 0.0);
    CHECK(brier_score(Forecast({0.5, 0.5, 0.0}), win) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(brier_score(Forecast({0.5, 0.3, 0.2}), win) == doctest::Approx(-0.19).epsilon(1e-12));
    CHECK(brier_score(Forecast({0.5, 0.25, 0.25}), win) ==
          doctest::Approx(-0.1875).epsilon(1e-12));
    CHECK(brier_score(Forecast({0.55, 0.45, 0.0}), win) ==
          doctest::Approx(-0.2025).epsilon(1e-12));
    const double third = 0.3333333333333333;
    CHECK(brier_score(Forecast({third, third, third}), win) ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(brier_score(Forecast({0.0, 1.0, 0.0}), win) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(brier_score(Forecast({0.5, 0.5}), Outcome{2}), std::invalid_argument);
    CHECK_THROWS_AS(brier_score(Forecast({0.5, 0.5}), Outcome{-1}), std::invalid_argument);
}

TEST_CASE("binary brier matches the two-category vector form") {
    for (double q = 0.0; q <= 1.0; q += 0.125) {
        const Forecast vec({1.0 - q, q});
        CHECK(brier_score(q, 1) == doctest::Approx(brier_score(vec, Outcome{1})).epsilon(1e-15));
        CHECK(brier_score(q, 0) == doctest::Approx(brier_score(vec, Outcome{0})).epsilon(1e-15));
    }
}

TEST_CASE("log score and its zero-probability policies") {
    const Outcome win{0};
    CHECK(log_score(Forecast({0.55, 0.45, 0.0}), win) ==
          doctest::Approx(std::log(0.55)).epsilon(1e-12));
    CHECK(log_score(Forecast({1.0, 0.0, 0.0}), win) == 0.0);
    CHECK(log_score(Forecast({0.0, 1.0, 0.0}), win) == -kInf);
    CHECK(log_score(Forecast({0.0, 1.0, 0.0}), win, LogZeroPolicy::Floor) ==
          doctest::Approx(std::log(1e-12)).epsilon(1e-12));
    CHECK_THROWS_AS(log_score(Forecast({0.0, 1.0, 0.0}), win, LogZeroPolicy::Reject),
                    std::domain_error);
    CHECK(log_score(0.0, 1) == -kInf);
    CHECK(log_score(1.0, 0) == -kInf);
}

TEST_CASE("spherical score closed form") {
    CHECK(spherical_score(0.5, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(spherical_score(1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spherical_score(0.8, 0) ==
          doctest::Approx(0.2 / std::sqrt(0.68)).epsilon(1e-12));  // 0.24253562503633294
    CHECK(spherical_score(0.0, 1) == 0.0);  // r > 0 everywhere, no blowup
}

TEST_CASE("elliptical score: indifference at q=alpha and sqrt(2) spherical reduction") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const EllipticalParams params(alpha);
        CHECK(elliptical_score(params, alpha, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(elliptical_score(params, alpha, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const EllipticalParams half(0.5);
    CHECK(elliptical_score(half, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-12));
    for (double q = 0.01; q < 1.0; q += 0.01) {
        for (int x : {0, 1}) {
            CHECK(elliptical_score(half, q, x) ==
                  doctest::Approx(std::sqrt(2.0) * spherical_score(q, x)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(EllipticalParams(0.0), std::invalid_argument);
    CHECK_THROWS_AS(EllipticalParams(1.0), std::invalid_argument);
}

TEST_CASE("elliptical triple values and consistency with the realized score") {
    const EllipticalParams half(0.5);
    const RuleTriple triple = elliptical_triple(half);
    CHECK(triple.entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(triple.exposure(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(triple.penalty(0.5) == doctest::Approx(4.0).epsilon(1e-12));
    for (double alpha : {0.2, 0.5, 0.8}) {
        const EllipticalParams params(alpha);
        const RuleTriple t = elliptical_triple(params);
        CHECK(t.exposure(alpha) == doctest::Approx(0.0).epsilon(1e-12));
        for (double q = 0.05; q < 1.0; q += 0.05) {
            for (int x : {0, 1}) {
                CHECK(induced_score(t, q, x) ==
                      doctest::Approx(elliptical_score(params, q, x)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("asymmetric log rule") {
    CHECK(poisson_asymmetric_score(1.0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(poisson_asymmetric_score(1e-6, 0) == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
    CHECK(poisson_asymmetric_score(0.1, 1) ==
          doctest::Approx(std::log(0.1) + 0.9).epsilon(1e-12));  // -1.4025850929940455
    CHECK_THROWS_AS(poisson_asymmetric_score(0.0, 1), std::domain_error);
    CHECK_THROWS_AS(poisson_asymmetric_score(0.0, 0), std::domain_error);
}

TEST_CASE("induced scores reproduce the closed forms") {
    const auto triples = builtin_triples();
    CHECK(induced_score(triples.at("brier"), 0.7, 1) == doctest::Approx(-0.09).epsilon(1e-12));
    CHECK(induced_score(triples.at("log"), 0.7, 1) ==
          doctest::Approx(std::log(0.7)).epsilon(1e-12));
    CHECK(induced_score(triples.at("spherical"), 0.5, 0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(induced_score(triples.at("log"), 0.0, 1), std::domain_error);

    // Savage consistency across the grid, both outcomes.
    double worst = 0.0;
    for (double q = 0.001; q < 0.9995; q += 0.001) {
        for (int x : {0, 1}) {
            worst = std::max(worst, std::abs(induced_score(triples.at("brier"), q, x) -
                                             brier_score(q, x)));
            worst = std::max(worst,
                             std::abs(induced_score(triples.at("log"), q, x) - log_score(q, x)));
            worst = std::max(worst, std::abs(induced_score(triples.at("spherical"), q, x) -
                                             spherical_score(q, x)));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("table of triples: entropy, exposure, penalty spot values") {
    const auto triples = builtin_triples();
    CHECK(triples.at("brier").penalty(0.1) == 2.0);
    CHECK(triples.at("brier").penalty(0.9) == 2.0);
    CHECK(triples.at("log").exposure(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(triples.at("spherical").entropy(0.5) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(triples.at("brier").entropy(0.25) == doctest::Approx(-0.1875).epsilon(1e-12));
    CHECK(triples.at("log").penalty(0.5) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("expected score at the truth equals the entropy") {
    auto triples = builtin_triples();
    std::vector<std::pair<RuleTriple, std::function<double(double, int)>>> rules;
    rules.emplace_back(triples.at("brier"), make_binary_rule("brier"));
    rules.emplace_back(triples.at("log"), make_binary_rule("log"));
    rules.emplace_back(triples.at("spherical"), make_binary_rule("spherical"));
    for (double alpha : {0.25, 0.5, 0.75})
        rules.emplace_back(elliptical_triple(EllipticalParams(alpha)),
                           make_binary_rule("elliptical", alpha));
    for (const auto& [triple, rule] : rules) {
        for (double p = 0.05; p < 1.0; p += 0.05) {
            CHECK(expected_score(rule, p, p) ==
                  doctest::Approx(triple.entropy(p)).epsilon(1e-12));
        }
    }
    // The asymmetric log rule has entropy p log p + 1 - p.
    const auto poisson = make_binary_rule("poisson");
    for (double p = 0.05; p < 1.0; p += 0.05) {
        CHECK(expected_score(poisson, p, p) ==
              doctest::Approx(p * std::log(p) + 1.0 - p).epsilon(1e-12));
    }
}

TEST_CASE("propriety: grid argmax of the expected score sits at the truth") {
    // Coarser grid than the acceptance suite, for speed.
    std::vector<std::function<double(double, int)>> rules;
    rules.push_back(make_binary_rule("brier"));
    rules.push_back(make_binary_rule("log"));
    rules.push_back(make_binary_rule("spherical"));
    rules.push_back(make_binary_rule("poisson"));
    for (double alpha : {0.1, 0.5, 0.9}) rules.push_back(make_binary_rule("elliptical", alpha));
    const double step = 0.005;
    for (const auto& rule : rules) {
        for (double p = 0.1; p < 1.0; p += 0.1) {
            CHECK(std::abs(grid_argmax(rule, p, step) - p) <= step + 1e-12);
        }
    }
}

TEST_CASE("jensen: score of the average forecast beats the average score") {
    Rng rng(17);
    for (const char* name : {"brier", "log"}) {
        const auto rule = make_binary_rule(name);
        for (int trial = 0; trial < 200; ++trial) {
            const int m = 2 + static_cast<int>(rng.uniform01() * 5);
            std::vector<double> qs(m);
            std::vector<double> ws(m);
            double wsum = 0.0;
            for (int i = 0; i < m; ++i) {
                qs[i] = 0.05 + 0.9 * rng.uniform01();
                ws[i] = 0.1 + rng.uniform01();
                wsum += ws[i];
            }
            for (int x : {0, 1}) {
                double mean_q = 0.0;
                double mean_score = 0.0;
                for (int i = 0; i < m; ++i) {
                    mean_q += ws[i] / wsum * qs[i];
                    mean_score += ws[i] / wsum * rule(qs[i], x);
                }
                CHECK(rule(mean_q, x) >= mean_score - 1e-12);
            }
        }
    }
}

TEST_CASE("symmetry under swapping the event and its complement") {
    for (const char* name : {"brier", "log", "spherical"}) {
        const auto rule = make_binary_rule(name);
        for (double q = 0.05; q < 1.0; q += 0.05) {
            for (int x : {0, 1}) {
                CHECK(rule(q, x) == doctest::Approx(rule(1.0 - q, 1 - x)).epsilon(1e-12));
            }
        }
    }
    // An off-centre elliptical rule is deliberately asymmetric, but swapping
    // alpha for 1-alpha restores the symmetry.
    const EllipticalParams a03(0.3);
    const EllipticalParams a07(0.7);
    CHECK(std::abs(elliptical_score(a03, 0.8, 1) - elliptical_score(a03, 0.2, 0)) > 1e-6);
    for (double q = 0.05; q < 1.0; q += 0.05) {
        for (int x : {0, 1}) {
            CHECK(elliptical_score(a03, q, x) ==
                  doctest::Approx(elliptical_score(a07, 1.0 - q, 1 - x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("exposure and penalty match finite differences of the entropy") {
    const double h = 1e-5;
    std::vector<RuleTriple> triples;
    for (auto& [name, triple] : builtin_triples()) triples.push_back(triple);
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9})
        triples.push_back(elliptical_triple(EllipticalParams(alpha)));
    for (const auto& triple : triples) {
        for (int i = 1; i <= 50; ++i) {
            const double p = static_cast<double>(i) / 51.0;
            const double d1 = (triple.entropy(p + h) - triple.entropy(p - h)) / (2.0 * h);
            const double d2 =
                (triple.entropy(p + h) - 2.0 * triple.entropy(p) + triple.entropy(p - h)) /
                (h * h);
            CHECK(std::abs(triple.exposure(p) - d1) < 1e-6);
            CHECK(std::abs(triple.penalty(p) - d2) < 1e-4);
            CHECK(triple.penalty(p) >= 0.0);  // entropies are convex
        }
    }
}

TEST_CASE("a random one-hot forecaster expects -2/3 on three categories") {
    // Exact expectation: right with probability 1/3 scoring 0, else -1.
    const double exact = (1.0 / 3.0) * 0.0 + (2.0 / 3.0) * -1.0;
    CHECK(exact == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));

    Rng rng(99);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int pick = static_cast<int>(rng.uniform01() * 3.0);
        Eigen::VectorXd probs = Eigen::VectorXd::Zero(3);
        probs[std::min(pick, 2)] = 1.0;
        sum += brier_score(Forecast(probs), Outcome{0});
    }
    const double mean = sum / n;
    const double se = std::sqrt((2.0 / 9.0) / n);  // variance of the -1/0 draw is 2/9
    CHECK(std::abs(mean - (-2.0 / 3.0)) < 3.0 * se);
}
