#pragma once

#include <scorecast/rules.hpp>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace scorecast {

/// Brier score of one binary event, decomposed against a hypothesized true
/// probability p:
///   -(X-q)^2 = -p(1-p) + (2q-1)(X-p) - (p-q)^2
/// The first term is what a forecaster who knows p expects; the middle term
/// is outcome luck with mean zero; the last is the skill deficit, zero only
/// at q = p.
struct LuckSkillSplit {
    double uncertainty;  ///< -p(1-p)
    double luck;         ///< (2q-1)(X-p)
    double skill;        ///< -(p-q)^2
    double total;        ///< their sum, equal to -(X-q)^2
};

inline LuckSkillSplit split_score(double true_p, double q, int x) {
    detail::check_probability(true_p, "true probability");
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    LuckSkillSplit s;
    s.uncertainty = -true_p * (1.0 - true_p);
    s.luck = (2.0 * q - 1.0) * (static_cast<double>(x) - true_p);
    s.skill = -(true_p - q) * (true_p - q);
    s.total = s.uncertainty + s.luck + s.skill;
    return s;
}

/// Variance of the luck term: (2q-1)^2 p(1-p). Zero for the q = 0.5
/// forecaster, whatever the outcome.
inline double exposure_variance(double true_p, double q) {
    detail::check_probability(true_p, "true probability");
    detail::check_probability(q, "forecast");
    const double e = 2.0 * q - 1.0;
    return e * e * true_p * (1.0 - true_p);
}

/// Paired comparison of two binary forecast streams scored on the same
/// outcomes. delta > 0 means the first stream scored higher.
struct ComparisonReport {
    double delta;        ///< mean Brier score difference, first minus second
    double sigma_bound;  ///< distribution-free bound on sd(delta): rms_diff/sqrt(n)
    double z_bound;      ///< delta / sigma_bound; conservative, true sd may be smaller
    Eigen::Index n_events;
    double rms_diff;     ///< root-mean-square forecast difference
};

/// delta = (1/N) sum (q'_i - q_i)(q'_i + q_i - 2 X_i), which equals the
/// difference of the two mean Brier scores. The bound needs no knowledge of
/// the true probabilities.
inline ComparisonReport compare_forecasters(const Eigen::ArrayXd& qs,
                                            const Eigen::ArrayXd& qs_prime,
                                            const Eigen::ArrayXi& xs) {
    const Eigen::Index n = qs.size();
    if (n == 0) throw std::invalid_argument("comparison needs at least one event");
    if (qs_prime.size() != n || xs.size() != n)
        throw std::invalid_argument("forecast and outcome streams must have equal length");
    for (Eigen::Index i = 0; i < n; ++i) {
        detail::check_probability(qs[i], "forecast");
        detail::check_probability(qs_prime[i], "forecast");
        detail::check_indicator(xs[i]);
    }
    const Eigen::ArrayXd diff = qs_prime - qs;
    const Eigen::ArrayXd x = xs.cast<double>();
    ComparisonReport r;
    r.n_events = n;
    r.delta = (diff * (qs_prime + qs - 2.0 * x)).mean();
    const double sum_sq = diff.square().sum();
    r.rms_diff = std::sqrt(sum_sq / static_cast<double>(n));
    r.sigma_bound = std::sqrt(sum_sq) / static_cast<double>(n);
    r.z_bound = r.sigma_bound > 0.0 ? r.delta / r.sigma_bound : 0.0;
    return r;
}

/// Normal-approximation mean and variance of delta when the per-event true
/// probabilities are hypothesized:
///   mean = (1/N) sum (q'-q)(q'+q-2p)
///   var  = (1/N^2) sum 4 p(1-p) (q'-q)^2
/// The variance never exceeds the distribution-free bound squared.
inline std::pair<double, double> comparison_mean_variance(const Eigen::ArrayXd& qs,
                                                          const Eigen::ArrayXd& qs_prime,
                                                          const Eigen::ArrayXd& ps) {
    const Eigen::Index n = qs.size();
    if (n == 0) throw std::invalid_argument("comparison needs at least one event");
    if (qs_prime.size() != n || ps.size() != n)
        throw std::invalid_argument("forecast and probability streams must have equal length");
    for (Eigen::Index i = 0; i < n; ++i) {
        detail::check_probability(qs[i], "forecast");
        detail::check_probability(qs_prime[i], "forecast");
        detail::check_probability(ps[i], "true probability");
    }
    const Eigen::ArrayXd diff = qs_prime - qs;
    const double mean = (diff * (qs_prime + qs - 2.0 * ps)).mean();
    const double nn = static_cast<double>(n);
    const double variance = (4.0 * ps * (1.0 - ps) * diff.square()).sum() / (nn * nn);
    return {mean, variance};
}

}  // namespace scorecast
