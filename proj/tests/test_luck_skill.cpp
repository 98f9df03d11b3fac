#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <scorecast/luck_skill.hpp>
#include <scorecast/rng.hpp>

#include <cmath>

using namespace scorecast;

TEST_CASE("split terms and their sum") {
    const LuckSkillSplit s = split_score(0.5, 0.6, 1);
    CHECK(s.uncertainty == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(s.luck == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(s.skill == doctest::Approx(-0.01).epsilon(1e-12));
    CHECK(s.total == doctest::Approx(-0.16).epsilon(1e-12));

    // q = 0.5 has no exposure to the outcome at all.
    for (double p : {0.0, 0.3, 0.8, 1.0}) {
        for (int x : {0, 1}) {
            CHECK(split_score(p, 0.5, x).luck == 0.0);
        }
    }

    // Forecasting the truth: no skill deficit.
    for (double p : {0.2, 0.5, 0.9}) {
        const LuckSkillSplit at_truth = split_score(p, p, 1);
        CHECK(at_truth.skill == 0.0);
        CHECK(at_truth.total ==
              doctest::Approx(-p * (1 - p) + (2 * p - 1) * (1 - p)).epsilon(1e-12));
    }
}

TEST_CASE("split reconstructs the score exactly on a grid") {
    for (double p = 0.0; p <= 1.0; p += 0.05) {
        for (double q = 0.0; q <= 1.0; q += 0.05) {
            for (int x : {0, 1}) {
                const LuckSkillSplit s = split_score(p, q, x);
                CHECK(std::abs(s.total - brier_score(q, x)) < 1e-12);
                CHECK(s.skill <= 0.0);
            }
        }
    }
}

TEST_CASE("exposure variance") {
    for (double p : {0.0, 0.25, 0.5, 1.0}) CHECK(exposure_variance(p, 0.5) == 0.0);
    CHECK(exposure_variance(0.5, 0.6) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(exposure_variance(0.0, 0.9) == 0.0);
    CHECK(exposure_variance(1.0, 0.9) == 0.0);
}

TEST_CASE("luck has zero mean and the stated variance over many draws") {
    const int n = 1000000;
    for (double p : {0.3, 0.5, 0.7}) {
        for (double q : {0.3, 0.5, 0.7}) {
            Rng rng(static_cast<std::uint64_t>(p * 1000 + q * 10));
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double luck = split_score(p, q, rng.bernoulli(p) ? 1 : 0).luck;
                sum += luck;
                sum_sq += luck * luck;
            }
            const double mean = sum / n;
            const double var = sum_sq / n - mean * mean;
            const double truth = exposure_variance(p, q);
            const double se_mean = std::sqrt(truth / n);
            CHECK(std::abs(mean) <= 4.0 * se_mean + 1e-12);
            if (truth > 0.0) CHECK(std::abs(var - truth) / truth < 0.02);
        }
    }
}

TEST_CASE("delta comparison on identical and synthetic streams") {
    Eigen::ArrayXd qs(3);
    qs << 0.2, 0.5, 0.9;
    Eigen::ArrayXi xs(3);
    xs << 1, 0, 1;
    const ComparisonReport same = compare_forecasters(qs, qs, xs);
    CHECK(same.delta == 0.0);
    CHECK(same.sigma_bound == 0.0);
    CHECK(same.z_bound == 0.0);

    CHECK_THROWS_AS(compare_forecasters(qs, qs, Eigen::ArrayXi(2)), std::invalid_argument);
    CHECK_THROWS_AS(compare_forecasters(Eigen::ArrayXd(0), Eigen::ArrayXd(0), Eigen::ArrayXi(0)),
                    std::invalid_argument);
}

TEST_CASE("delta equals the difference of mean scores") {
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 10 + static_cast<int>(rng.uniform01() * 90);
        Eigen::ArrayXd qs(n), qs_prime(n);
        Eigen::ArrayXi xs(n);
        for (int i = 0; i < n; ++i) {
            qs[i] = rng.uniform01();
            qs_prime[i] = rng.uniform01();
            xs[i] = rng.bernoulli(0.5) ? 1 : 0;
        }
        const ComparisonReport report = compare_forecasters(qs, qs_prime, xs);
        double mean_q = 0.0, mean_qp = 0.0;
        for (int i = 0; i < n; ++i) {
            mean_q += brier_score(qs[i], xs[i]) / n;
            mean_qp += brier_score(qs_prime[i], xs[i]) / n;
        }
        CHECK(std::abs(report.delta - (mean_q - mean_qp)) < 1e-12);
        CHECK(report.sigma_bound ==
              doctest::Approx(report.rms_diff / std::sqrt(double(n))).epsilon(1e-12));
    }
}

TEST_CASE("the 100-question, rms 0.1 bound is 0.01") {
    const int n = 100;
    Eigen::ArrayXd qs = Eigen::ArrayXd::Constant(n, 0.5);
    Eigen::ArrayXd qs_prime = Eigen::ArrayXd::Constant(n, 0.6);
    Eigen::ArrayXi xs = Eigen::ArrayXi::Zero(n);
    const ComparisonReport report = compare_forecasters(qs, qs_prime, xs);
    CHECK(report.rms_diff == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(report.sigma_bound == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("hypothesized mean and variance of delta") {
    Eigen::ArrayXd qs(4), qs_prime(4), ps(4);
    qs << 0.1, 0.4, 0.6, 0.9;
    qs_prime << 0.2, 0.3, 0.7, 0.8;

    // First forecaster is the savant: the mean gap is the mean squared
    // forecast difference.
    const auto [mean_savant, var_savant] = comparison_mean_variance(qs, qs_prime, qs);
    CHECK(mean_savant ==
          doctest::Approx((qs_prime - qs).square().mean()).epsilon(1e-12));
    CHECK(mean_savant >= 0.0);

    ps.setConstant(0.5);
    const auto [mean_half, var_half] = comparison_mean_variance(qs, qs_prime, ps);
    const double n = 4.0;
    CHECK(var_half ==
          doctest::Approx((qs_prime - qs).square().sum() / (n * n)).epsilon(1e-12));

    ps << 0.0, 1.0, 0.0, 1.0;
    const auto [mean_det, var_det] = comparison_mean_variance(qs, qs_prime, ps);
    CHECK(var_det == 0.0);

    // The hypothesized variance never exceeds the distribution-free bound.
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::ArrayXd a(10), b(10), p(10);
        Eigen::ArrayXi x(10);
        for (int i = 0; i < 10; ++i) {
            a[i] = rng.uniform01();
            b[i] = rng.uniform01();
            p[i] = rng.uniform01();
            x[i] = 0;
        }
        const double bound = compare_forecasters(a, b, x).sigma_bound;
        const auto [m, v] = comparison_mean_variance(a, b, p);
        CHECK(v <= bound * bound + 1e-15);
    }
}

TEST_CASE("delta ensemble: sample sd respects the bound and matches the exact sigma") {
    const int n = 100;
    const int replicates = 100000;
    Rng setup(1234);
    Eigen::ArrayXd qs(n), qs_prime(n), ps(n);
    for (int i = 0; i < n; ++i) {
        ps[i] = 0.2 + 0.6 * setup.uniform01();
        qs[i] = ps[i];
        qs_prime[i] = std::clamp(ps[i] + 0.1 * (setup.uniform01() - 0.5), 0.0, 1.0);
    }
    const double bound =
        std::sqrt((qs_prime - qs).square().sum()) / static_cast<double>(n);
    const auto [expected_mean, expected_var] = comparison_mean_variance(qs, qs_prime, ps);

    Rng rng(99);
    double sum = 0.0, sum_sq = 0.0;
    Eigen::ArrayXi xs(n);
    for (int r = 0; r < replicates; ++r) {
        for (int i = 0; i < n; ++i) xs[i] = rng.bernoulli(ps[i]) ? 1 : 0;
        const double delta = compare_forecasters(qs, qs_prime, xs).delta;
        sum += delta;
        sum_sq += delta * delta;
    }
    const double mean = sum / replicates;
    const double var = sum_sq / replicates - mean * mean;
    const double sd = std::sqrt(var);

    // Monte Carlo sd of the sample sd is roughly sd/sqrt(2 R).
    const double se_sd = sd / std::sqrt(2.0 * replicates);
    CHECK(sd <= bound + 3.0 * se_sd);
    CHECK(std::abs(sd - std::sqrt(expected_var)) / std::sqrt(expected_var) < 0.02);
    CHECK(std::abs(mean - expected_mean) < 4.0 * sd / std::sqrt(double(replicates)));
}
