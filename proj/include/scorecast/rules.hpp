#pragma once

#include <scorecast/forecast.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace scorecast {

/// All scores here are positively oriented: higher is better, 0 is ideal
/// for the Brier and log families.
///
/// Binary overloads take q = forecast probability of the event and the
/// realized indicator x in {0, 1}. They agree with the K=2 vector forms.

/// What log-family scorers do when the realized outcome had probability 0.
enum class LogZeroPolicy {
    NegInfinity,  ///< return -inf (the bankrupt-gambler convention)
    Floor,        ///< return log(kLogFloorEpsilon) instead of -inf
    Reject,       ///< throw; forecasts of exactly 0 are disallowed
};

inline constexpr double kLogFloorEpsilon = 1e-12;

namespace detail {

inline void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " +
                                    std::to_string(p));
}

inline void check_indicator(int x) {
    if (x != 0 && x != 1)
        throw std::invalid_argument("binary outcome must be 0 or 1, got " + std::to_string(x));
}

inline void check_outcome(const Forecast& forecast, Outcome outcome) {
    if (outcome.index < 0 || outcome.index >= forecast.categories())
        throw std::invalid_argument("outcome index " + std::to_string(outcome.index) +
                                    " outside forecast with " +
                                    std::to_string(forecast.categories()) + " categories");
}

inline double log_of(double q, LogZeroPolicy policy) {
    if (q > 0.0) return std::log(q);
    switch (policy) {
        case LogZeroPolicy::NegInfinity: return -std::numeric_limits<double>::infinity();
        case LogZeroPolicy::Floor: return std::log(kLogFloorEpsilon);
        case LogZeroPolicy::Reject:
            throw std::domain_error("forecast probability 0 on the realized outcome");
    }
    return std::numeric_limits<double>::quiet_NaN();  // unreachable
}

}  // namespace detail

/// -1/2 * sum_k (X_k - q_k)^2 over all categories, X the one-hot outcome.
/// 0 for a perfectly confident correct forecast, -1 for a perfectly
/// confident wrong one.
inline double brier_score(const Forecast& forecast, Outcome outcome) {
    detail::check_outcome(forecast, outcome);
    const double q_realized = forecast[outcome.index];
    const double s = -0.5 * (forecast.probs().squaredNorm() + 1.0 - 2.0 * q_realized);
    return s == 0.0 ? 0.0 : s;  // normalize -0.0
}

/// Binary Brier score -(x - q)^2; identical to the K=2 vector form.
inline double brier_score(double q, int x) {
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    const double d = static_cast<double>(x) - q;
    const double s = -d * d;
    return s == 0.0 ? 0.0 : s;
}

/// log of the forecast probability of the realized outcome.
inline double log_score(const Forecast& forecast, Outcome outcome,
                        LogZeroPolicy policy = LogZeroPolicy::NegInfinity) {
    detail::check_outcome(forecast, outcome);
    return detail::log_of(forecast[outcome.index], policy);
}

inline double log_score(double q, int x, LogZeroPolicy policy = LogZeroPolicy::NegInfinity) {
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    return detail::log_of(x == 1 ? q : 1.0 - q, policy);
}

/// q/r when the event happens, (1-q)/r when it does not, with
/// r = sqrt(q^2 + (1-q)^2). Binary only.
inline double spherical_score(double q, int x) {
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    const double r = std::sqrt(q * q + (1.0 - q) * (1.0 - q));
    return (x == 1 ? q : 1.0 - q) / r;
}

/// Asymmetry parameter of the elliptical score; the rule is most sensitive
/// to forecast errors near alpha.
struct EllipticalParams {
    double alpha;

    explicit EllipticalParams(double a) : alpha(a) {
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument("elliptical alpha must lie strictly in (0,1), got " +
                                        std::to_string(a));
    }
};

namespace detail {

inline double elliptical_r(double alpha, double p) {
    return std::sqrt((1.0 - alpha) * p * p + alpha * (1.0 - p) * (1.0 - p));
}

}  // namespace detail

/// Asymmetric generalization of the spherical score:
///   X * sqrt((1-a)/a) * q/r + (1-X) * sqrt(a/(1-a)) * (1-q)/r,
/// r^2 = (1-a) q^2 + a (1-q)^2. Forecasting q = alpha scores exactly 1
/// for either outcome.
inline double elliptical_score(EllipticalParams params, double q, int x) {
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    const double a = params.alpha;
    const double r = detail::elliptical_r(a, q);
    if (x == 1) return std::sqrt((1.0 - a) / a) * q / r;
    return std::sqrt(a / (1.0 - a)) * (1.0 - q) / r;
}

/// x log q + (1 - q): pays the complement of the forecast whether or not
/// the event happens, plus a log penalty when it does. Deliberately
/// asymmetric in the two outcomes. q = 0 is always rejected.
inline double poisson_asymmetric_score(double q, int x) {
    detail::check_probability(q, "forecast");
    detail::check_indicator(x);
    if (q <= 0.0)
        throw std::domain_error("forecast probability must be strictly positive for the "
                                "asymmetric log rule");
    return static_cast<double>(x) * std::log(q) + (1.0 - q);
}

/// A proper scoring rule in Savage form: a convex entropy F with its first
/// two derivatives. F(p) is the expected score when forecasting the true
/// probability p; F' (the exposure) scales the outcome luck; F'' (the
/// penalty) sets the second-order cost of misforecasting.
struct RuleTriple {
    std::string name;
    std::function<double(double)> entropy;
    std::function<double(double)> exposure;
    std::function<double(double)> penalty;
};

/// Realized score of forecast q under the rule induced by `triple`:
/// F(q) + F'(q) (x - q). Requires q strictly inside (0,1), where every
/// built-in entropy is finite and differentiable.
inline double induced_score(const RuleTriple& triple, double q, int x) {
    detail::check_indicator(x);
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("induced score requires a forecast strictly inside (0,1)");
    return triple.entropy(q) + triple.exposure(q) * (static_cast<double>(x) - q);
}

/// Triple for the elliptical rule: entropy r/sqrt(a(1-a)), exposure
/// (p-a)/(sqrt(a(1-a)) r), penalty sqrt(a(1-a))/r^3.
inline RuleTriple elliptical_triple(EllipticalParams params) {
    const double a = params.alpha;
    const double c = std::sqrt(a * (1.0 - a));
    return RuleTriple{
        "elliptical(alpha=" + std::to_string(a) + ")",
        [a, c](double p) { return detail::elliptical_r(a, p) / c; },
        [a, c](double p) { return (p - a) / (c * detail::elliptical_r(a, p)); },
        [a, c](double p) {
            const double r = detail::elliptical_r(a, p);
            return c / (r * r * r);
        },
    };
}

/// The three classic triples, keyed "brier", "log", "spherical".
/// Entropies are the convex (negative-valued, except spherical) forms:
///   brier      p(p-1),                2p-1,            2
///   log        p log p + (1-p)log(1-p), log(p/(1-p)),  1/(p(1-p))
///   spherical  r,                     (2p-1)/r,        1/r^3,   r^2 = p^2+(1-p)^2
inline std::map<std::string, RuleTriple> builtin_triples() {
    auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
    std::map<std::string, RuleTriple> triples;
    triples["brier"] = RuleTriple{
        "brier",
        [](double p) { return p * (p - 1.0); },
        [](double p) { return 2.0 * p - 1.0; },
        [](double) { return 2.0; },
    };
    triples["log"] = RuleTriple{
        "log",
        [xlogx](double p) { return xlogx(p) + xlogx(1.0 - p); },
        [](double p) { return std::log(p / (1.0 - p)); },
        [](double p) { return 1.0 / (p * (1.0 - p)); },
    };
    triples["spherical"] = RuleTriple{
        "spherical",
        [](double p) { return std::sqrt(p * p + (1.0 - p) * (1.0 - p)); },
        [](double p) { return (2.0 * p - 1.0) / std::sqrt(p * p + (1.0 - p) * (1.0 - p)); },
        [](double p) {
            const double r = std::sqrt(p * p + (1.0 - p) * (1.0 - p));
            return 1.0 / (r * r * r);
        },
    };
    return triples;
}

/// Binary scorer S(q, x) for a rule named "brier", "log", "spherical",
/// "elliptical" (uses `alpha`) or "poisson". `log_zero` applies to the log
/// rule only.
inline std::function<double(double, int)> make_binary_rule(
    const std::string& name, double alpha = 0.5,
    LogZeroPolicy log_zero = LogZeroPolicy::NegInfinity) {
    if (name == "brier") return [](double q, int x) { return brier_score(q, x); };
    if (name == "log")
        return [log_zero](double q, int x) { return log_score(q, x, log_zero); };
    if (name == "spherical") return [](double q, int x) { return spherical_score(q, x); };
    if (name == "elliptical") {
        const EllipticalParams params(alpha);
        return [params](double q, int x) { return elliptical_score(params, q, x); };
    }
    if (name == "poisson")
        return [](double q, int x) { return poisson_asymmetric_score(q, x); };
    throw std::invalid_argument("unknown scoring rule: " + name);
}

}  // namespace scorecast
