#pragma once

#include <scorecast/rng.hpp>
#include <scorecast/rules.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace scorecast {

/// The even-odds biased-coin game: the bettor knows the coin shows heads
/// with probability `win_prob` and stakes `stake_fraction` of their bank on
/// every play, doubling the stake on a win and losing it otherwise.
/// Full-bank bets (fraction 1) are excluded; they bankrupt with certainty
/// in the long run.
struct KellyGame {
    double win_prob;
    double stake_fraction;

    KellyGame(double p, double f) : win_prob(p), stake_fraction(f) {
        detail::check_probability(p, "win probability");
        if (!(f >= 0.0 && f < 1.0))
            throw std::invalid_argument("stake fraction must lie in [0,1), got " +
                                        std::to_string(f));
    }
};

/// Growth-optimal stake fraction for the even-odds game: 2p - 1, clamped to
/// 0 when there is no edge (the game offers no short side).
inline double kelly_fraction(double p) {
    detail::check_probability(p, "win probability");
    return p <= 0.5 ? 0.0 : 2.0 * p - 1.0;
}

/// Expected log bank multiplier per play: p log(1+f) + (1-p) log(1-f).
/// At f = 2p-1 this equals p log p + (1-p) log(1-p) + log 2.
inline double expected_log_growth(double p, double f) {
    detail::check_probability(p, "win probability");
    if (!(f >= 0.0 && f < 1.0))
        throw std::invalid_argument("stake fraction must lie in [0,1), got " + std::to_string(f));
    // 0 * log(...) = 0 at the probability endpoints.
    double g = 0.0;
    if (p > 0.0) g += p * std::log1p(f);
    if (p < 1.0) g += (1.0 - p) * std::log1p(-f);
    return g;
}

/// Seeded replay of the game: entry i is the log of the bank multiplier
/// after play i+1, so exp(result[n-1]) is the final bank and
/// result[n-1]/n the realized per-play log growth. Kept in log space to
/// survive long runs.
inline Eigen::ArrayXd simulate_bank(const KellyGame& game, Eigen::Index n_plays,
                                    std::uint64_t seed) {
    if (n_plays < 1) throw std::invalid_argument("need at least one play");
    const double up = std::log1p(game.stake_fraction);
    const double down = std::log1p(-game.stake_fraction);
    Rng rng(seed);
    Eigen::ArrayXd log_bank(n_plays);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n_plays; ++i) {
        acc += rng.bernoulli(game.win_prob) ? up : down;
        log_bank[i] = acc;
    }
    return log_bank;
}

}  // namespace scorecast
