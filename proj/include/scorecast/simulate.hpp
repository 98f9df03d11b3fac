#pragma once

#include <scorecast/rules.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace scorecast {

/// A synthetic forecaster in the tournament simulator.
struct ForecasterSpec {
    enum class Kind {
        Savant,   ///< forecasts the true probability
        Offset,   ///< true probability plus a fixed offset delta (clipped to [0,1])
        Uniform,  ///< always forecasts 0.5; immune to luck under the Brier rule
        Noise,    ///< true probability plus N(0, sigma) noise, fresh per replicate
    };

    Kind kind = Kind::Savant;
    double delta = 0.0;      ///< Offset only
    bool random_sign = false;  ///< Offset only: flip the offset's sign per question
    double sigma = 0.0;      ///< Noise only
    std::string label;

    static ForecasterSpec savant();
    static ForecasterSpec offset(double delta, bool random_sign = false);
    static ForecasterSpec uniform();
    static ForecasterSpec noise(double sigma);
};

struct SimConfig {
    Eigen::Index n_questions = 100;
    Eigen::Index n_replicates = 1000;
    /// Per-question true probabilities; a single entry is broadcast.
    Eigen::ArrayXd true_p = Eigen::ArrayXd::Constant(1, 0.5);
    std::vector<ForecasterSpec> forecasters;
    std::string rule = "brier";
    double alpha = 0.5;  ///< elliptical rule only
    LogZeroPolicy log_zero = LogZeroPolicy::NegInfinity;
    std::uint64_t seed = 0;

    void validate() const;
    Eigen::ArrayXd expanded_true_p() const;  ///< broadcast to n_questions
};

/// Everything a simulation run produces. Mean scores are stored per
/// replicate so callers can dump or re-summarize them; the pairwise
/// matrices count strict wins and exact ties separately (two replicate
/// means are a tie when they differ by at most kTieEpsilon, far below any
/// real score gap but above accumulated rounding).
struct SimResult {
    static constexpr double kTieEpsilon = 1e-12;

    std::vector<std::string> labels;
    Eigen::MatrixXd mean_scores;  ///< n_replicates x n_forecasters
    Eigen::MatrixXd beat;         ///< beat(a,b) = P(mean_a > mean_b strictly); diagonal 0
    Eigen::MatrixXd tie;          ///< tie(a,b) = P(|mean_a - mean_b| <= kTieEpsilon)
    Eigen::ArrayXi clipped;       ///< per forecaster: generated q values clipped into [0,1]
    std::uint64_t seed = 0;

    Eigen::Index n_replicates() const { return mean_scores.rows(); }
    Eigen::Index n_forecasters() const { return mean_scores.cols(); }

    double beat_probability(Eigen::Index a, Eigen::Index b) const { return beat(a, b); }
    /// Strict wins plus half the ties: the quantity a continuous normal
    /// approximation of the score difference estimates.
    double beat_probability_mid(Eigen::Index a, Eigen::Index b) const {
        return beat(a, b) + 0.5 * tie(a, b);
    }

    struct Summary {
        std::string label;
        double mean;
        double stddev;
        double min;
        double max;
    };
    std::vector<Summary> summaries() const;
};

/// Runs the tournament simulation: every replicate draws one outcome per
/// question from the true probabilities and scores all forecasters on the
/// same outcomes. Deterministic given the seed; replicate r uses the
/// stream derive_seed(seed, r), with per-forecaster noise streams derived
/// from that, so results do not depend on execution order.
SimResult run_simulation(const SimConfig& config);

/// Normal-approximation probability that a forecaster offset by `delta`
/// from the true probability p beats the savant over n questions:
/// Phi(-delta sqrt(n) / (2 sqrt(p(1-p)))). The score-difference mean is
/// -delta^2 per question and its variance 4 p(1-p) delta^2.
double theoretical_beat_probability(double delta, double p, Eigen::Index n);

}  // namespace scorecast
