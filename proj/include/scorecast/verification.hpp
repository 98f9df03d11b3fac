#pragma once

#include <scorecast/forecast.hpp>

#include <Eigen/Core>

#include <string>
#include <vector>

namespace scorecast {

/// A forecaster's record over binary events: forecast probability of the
/// event, the 0/1 outcome, and an id per event.
struct BinaryRecord {
    std::vector<std::string> event_ids;
    Eigen::ArrayXd forecasts;
    Eigen::ArrayXi outcomes;

    Eigen::Index size() const { return forecasts.size(); }
    void validate() const;

    /// Record without meaningful ids (ids become 0-based indices).
    static BinaryRecord from(Eigen::ArrayXd forecasts, Eigen::ArrayXi outcomes);
};

/// Mean binary Brier score -(1/N) sum (x_i - q_i)^2.
double mean_brier(const BinaryRecord& record);

/// How events are grouped for the reliability/resolution partition.
struct BinningPolicy {
    enum class Kind { ByValue, Edges };
    Kind kind = Kind::ByValue;
    std::vector<double> edge_list;  ///< ascending, spanning [0,1]; Edges only

    static BinningPolicy by_value() { return {}; }
    static BinningPolicy edges(std::vector<double> edges);
};

struct BinStats {
    std::string label;
    double representative_forecast;  ///< q_mu: the shared value, or the bin mean
    Eigen::Index count;
    double observed_frequency;  ///< fraction of events in the bin that occurred
};

/// mean Brier = -uncertainty + resolution - reliability, over bins mu:
///   uncertainty  f(1-f)                      f = overall observed frequency
///   resolution   (1/N) sum N_mu (f - f_mu)^2
///   reliability  (1/N) sum N_mu (q_mu - f_mu)^2
/// The identity is exact under by-value binning; under fixed edges the
/// within-bin forecast spread leaks into `residual`.
struct MurphyReport {
    double uncertainty;
    double resolution;
    double reliability;
    double overall_frequency;
    double mean_brier;
    double residual;  ///< mean_brier - (-uncertainty + resolution - reliability)
    std::vector<BinStats> bins;

    double reconstruction() const { return -uncertainty + resolution - reliability; }
};

MurphyReport murphy_decompose(const BinaryRecord& record,
                              const BinningPolicy& binning = BinningPolicy::by_value());

/// Decomposition of the mean Brier score around a known base frequency f,
/// writing each forecast as q_i = f + eps_i:
///   -f(1-f) + (2/N) sum eps_i (X_i - f) - (1/N) sum eps_i^2
/// The base term is the score to beat; the gain term pays for departures
/// correlated with the outcomes; the stake term is what those departures
/// risk. Exact when f is the record's own observed frequency (or f = 1/2);
/// otherwise the gap appears in `residual`.
struct ClimatologyReport {
    double base_frequency;     ///< f, supplied by the caller
    Eigen::ArrayXd epsilons;   ///< q_i - f
    double base_term;          ///< -f(1-f)
    double gain_term;          ///< (2/N) sum eps_i (X_i - f)
    double stake_term;         ///< (1/N) sum eps_i^2
    Eigen::ArrayXd directions; ///< gamma = eps / sqrt(sum eps^2); zeros when eps == 0
    double optimal_scale;      ///< R* = sum gamma_i (X_i - f); negative means anticorrelated
    double mean_brier;
    double residual;           ///< mean_brier - (base + gain - stake)
};

ClimatologyReport climatology_decompose(const BinaryRecord& record, double base_frequency);

/// R* = sum gamma_i (X_i - f): the scale that maximizes the mean Brier
/// score over forecasts q_i = f + R gamma_i. `gammas` must have unit norm.
double optimal_backing(const BinaryRecord& record, double base_frequency,
                       const Eigen::ArrayXd& gammas);

/// (score - baseline) / |baseline| for a negative-valued baseline; positive
/// iff the forecaster beats the baseline. An affine function of the score,
/// so it preserves rankings and propriety.
double skill_score(double score, double baseline_score);

/// -f(1-f): expected binary Brier score of forecasting the base rate f
/// when f is the true probability.
double climatology_baseline_binary(double f);

/// -(1 - sum p_k^2)/2: expected multicategory Brier score of forecasting
/// the climatology when it is true.
double climatology_baseline_multicat(const Forecast& freqs);

}  // namespace scorecast
