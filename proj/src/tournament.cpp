#include <scorecast/tournament.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace scorecast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool event_order(const EventRecord& a, const EventRecord& b) {
    if (a.round != b.round) return a.round < b.round;
    return a.event_id < b.event_id;
}

}  // namespace

ScoringRule make_rule(const std::string& name, double alpha, LogZeroPolicy log_zero) {
    ScoringRule rule;
    rule.name = name;
    if (name == "brier") {
        rule.max_categories = 0;
        rule.score = [](const Forecast& f, Outcome o) { return brier_score(f, o); };
    } else if (name == "log") {
        rule.max_categories = 0;
        rule.score = [log_zero](const Forecast& f, Outcome o) {
            return log_score(f, o, log_zero);
        };
    } else {
        const auto binary = make_binary_rule(name, alpha, log_zero);
        rule.max_categories = 2;
        rule.score = [binary](const Forecast& f, Outcome o) {
            return binary(f[1], o.index == 1 ? 1 : 0);
        };
    }
    return rule;
}

TournamentTable build_table(const std::vector<EventRecord>& events,
                            const std::vector<ForecastSubmission>& submissions,
                            const ScoringRule& rule, MissingForecastPolicy policy) {
    TournamentTable table;
    table.rule_name = rule.name;
    for (const auto& event : events) {
        if (event.categories < 2)
            throw std::invalid_argument("event " + event.event_id +
                                        " has fewer than 2 categories");
        if (event.resolved()) {
            if (*event.outcome < 0 || *event.outcome >= event.categories)
                throw std::invalid_argument("event " + event.event_id +
                                            " has an out-of-range outcome");
            if (rule.max_categories != 0 && event.categories > rule.max_categories)
                throw std::invalid_argument("rule '" + rule.name + "' handles at most " +
                                            std::to_string(rule.max_categories) +
                                            " categories but event " + event.event_id +
                                            " has " + std::to_string(event.categories));
            table.events.push_back(event);
        }
    }
    if (table.events.empty()) throw std::invalid_argument("no resolved events to score");
    std::sort(table.events.begin(), table.events.end(), event_order);

    std::map<std::string, Eigen::Index> event_index;
    for (Eigen::Index e = 0; e < table.n_events(); ++e)
        event_index[table.events[static_cast<std::size_t>(e)].event_id] = e;
    std::map<std::string, Eigen::Index> all_events;  // includes unresolved
    for (const auto& event : events)
        all_events.emplace(event.event_id, static_cast<Eigen::Index>(all_events.size()));

    std::set<std::string> ids;
    for (const auto& sub : submissions) ids.insert(sub.forecaster_id);
    table.forecaster_ids.assign(ids.begin(), ids.end());
    if (table.forecaster_ids.empty()) throw std::invalid_argument("no submissions to score");
    std::map<std::string, Eigen::Index> forecaster_index;
    for (Eigen::Index f = 0; f < table.n_forecasters(); ++f)
        forecaster_index[table.forecaster_ids[static_cast<std::size_t>(f)]] = f;

    const auto n_e = static_cast<std::size_t>(table.n_events());
    const auto n_f = static_cast<std::size_t>(table.n_forecasters());
    table.forecasts.assign(n_e, std::vector<std::optional<Forecast>>(n_f));
    table.imputed.assign(n_e, std::vector<bool>(n_f, false));

    for (const auto& sub : submissions) {
        if (!all_events.count(sub.event_id))
            throw std::invalid_argument("submission for unknown event " + sub.event_id);
        const auto it = event_index.find(sub.event_id);
        if (it == event_index.end()) continue;  // unresolved event, nothing to score
        const auto e = static_cast<std::size_t>(it->second);
        const auto f = static_cast<std::size_t>(forecaster_index.at(sub.forecaster_id));
        const auto& event = table.events[e];
        if (sub.forecast.categories() != event.categories)
            throw std::invalid_argument("forecast for event " + sub.event_id + " has " +
                                        std::to_string(sub.forecast.categories()) +
                                        " categories, event has " +
                                        std::to_string(event.categories));
        if (table.forecasts[e][f].has_value())
            throw std::invalid_argument("duplicate submission by " + sub.forecaster_id +
                                        " for event " + sub.event_id);
        table.forecasts[e][f] = sub.forecast;
    }

    if (policy == MissingForecastPolicy::ImputeUniform) {
        for (std::size_t e = 0; e < n_e; ++e) {
            for (std::size_t f = 0; f < n_f; ++f) {
                if (!table.forecasts[e][f].has_value()) {
                    table.forecasts[e][f] = Forecast::uniform(table.events[e].categories);
                    table.imputed[e][f] = true;
                }
            }
        }
    }

    table.scores.resize(table.n_events(), table.n_forecasters());
    for (std::size_t e = 0; e < n_e; ++e) {
        const Outcome outcome{*table.events[e].outcome};
        for (std::size_t f = 0; f < n_f; ++f) {
            table.scores(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(f)) =
                table.forecasts[e][f].has_value() ? rule.score(*table.forecasts[e][f], outcome)
                                                  : kNaN;
        }
    }
    return table;
}

namespace {

/// Distribution-free per-event variance bound for the score difference of
/// two forecast vectors: the score difference is an affine function of the
/// outcome indicator, taking value c_k on category k with
/// c_k proportional to q_k - q'_k, so its variance is at most
/// ((max c - min c)/2)^2. For two categories this is exactly the squared
/// forecast difference.
double pair_event_variance_bound(const Forecast& a, const Forecast& b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < a.categories(); ++k) {
        const double d = a[k] - b[k];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    const double half_spread = 0.5 * (hi - lo);
    return half_spread * half_spread;
}

struct PairStats {
    Eigen::Index common = 0;
    double delta = kNaN;
    double sigma_bound = kNaN;
    bool approximate = false;
};

PairStats pair_stats(const TournamentTable& table, Eigen::Index a, Eigen::Index b) {
    PairStats stats;
    double sum_a = 0.0;
    double sum_b = 0.0;
    double var_sum = 0.0;
    bool any_multicat = false;
    for (Eigen::Index e = 0; e < table.n_events(); ++e) {
        const auto& fa = table.forecasts[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)];
        const auto& fb = table.forecasts[static_cast<std::size_t>(e)][static_cast<std::size_t>(b)];
        if (!fa.has_value() || !fb.has_value()) continue;
        stats.common += 1;
        sum_a += table.scores(e, a);
        sum_b += table.scores(e, b);
        var_sum += pair_event_variance_bound(*fa, *fb);
        any_multicat = any_multicat || fa->categories() > 2;
    }
    if (stats.common == 0) return stats;
    const double n = static_cast<double>(stats.common);
    const double mean_a = sum_a / n;
    const double mean_b = sum_b / n;
    // Subtract the means rather than averaging per-event differences so a
    // -inf score stream yields a -inf (or +inf) delta instead of NaN.
    if (std::isinf(mean_a) && std::isinf(mean_b) && mean_a == mean_b) {
        stats.delta = kNaN;  // both ruined; no meaningful gap
    } else {
        stats.delta = mean_a - mean_b;
    }
    stats.sigma_bound = std::sqrt(var_sum) / n;
    stats.approximate = any_multicat || table.rule_name != "brier";
    return stats;
}

bool row_better(const LeaderboardRow& a, const LeaderboardRow& b) {
    const bool a_data = a.events_scored > 0;
    const bool b_data = b.events_scored > 0;
    if (a_data != b_data) return a_data;
    if (!a_data) return false;
    if (std::isnan(a.mean_score) || std::isnan(b.mean_score))
        return !std::isnan(a.mean_score) && std::isnan(b.mean_score);
    return a.mean_score > b.mean_score;
}

bool row_equal_score(const LeaderboardRow& a, const LeaderboardRow& b) {
    return !row_better(a, b) && !row_better(b, a);
}

}  // namespace

Leaderboard score_tournament(const TournamentTable& table) {
    Leaderboard board;
    board.rows.reserve(static_cast<std::size_t>(table.n_forecasters()));

    for (Eigen::Index f = 0; f < table.n_forecasters(); ++f) {
        LeaderboardRow row;
        row.forecaster_id = table.forecaster_ids[static_cast<std::size_t>(f)];
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index e = 0; e < table.n_events(); ++e) {
            TrajectoryPoint point;
            point.event_id = table.events[static_cast<std::size_t>(e)].event_id;
            const double s = table.scores(e, f);
            if (std::isnan(s)) {
                point.score = kNaN;
                point.skipped = true;
            } else {
                point.score = s;
                point.imputed = table.imputed[static_cast<std::size_t>(e)]
                                             [static_cast<std::size_t>(f)];
                sum += s;
                count += 1;
            }
            point.cumulative_mean = count > 0 ? sum / static_cast<double>(count) : kNaN;
            row.trajectory.push_back(std::move(point));
        }
        row.events_scored = count;
        row.mean_score = count > 0 ? sum / static_cast<double>(count) : kNaN;
        board.rows.push_back(std::move(row));
    }

    std::sort(board.rows.begin(), board.rows.end(), [](const auto& a, const auto& b) {
        if (row_better(a, b)) return true;
        if (row_better(b, a)) return false;
        return a.forecaster_id < b.forecaster_id;
    });
    for (std::size_t i = 0; i < board.rows.size(); ++i) {
        board.rows[i].rank = (i > 0 && row_equal_score(board.rows[i], board.rows[i - 1]))
                                 ? board.rows[i - 1].rank
                                 : static_cast<int>(i) + 1;
    }

    // Margin to the next strictly lower mean.
    for (std::size_t i = 0; i < board.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < board.rows.size(); ++j) {
            if (row_better(board.rows[i], board.rows[j])) {
                if (board.rows[i].events_scored > 0 && board.rows[j].events_scored > 0)
                    board.rows[i].margin_to_next =
                        board.rows[i].mean_score - board.rows[j].mean_score;
                break;
            }
        }
    }

    // Two-sigma confidence band against the widest pairwise bound.
    std::map<std::string, Eigen::Index> column;
    for (Eigen::Index f = 0; f < table.n_forecasters(); ++f)
        column[table.forecaster_ids[static_cast<std::size_t>(f)]] = f;
    for (auto& row : board.rows) {
        double max_sigma = 0.0;
        const Eigen::Index f = column.at(row.forecaster_id);
        for (Eigen::Index g = 0; g < table.n_forecasters(); ++g) {
            if (g == f) continue;
            const PairStats stats = pair_stats(table, f, g);
            if (stats.common > 0) max_sigma = std::max(max_sigma, stats.sigma_bound);
        }
        row.band_low = row.mean_score - 2.0 * max_sigma;
        row.band_high = row.mean_score + 2.0 * max_sigma;
    }
    return board;
}

Leaderboard score_tournament(const std::vector<EventRecord>& events,
                             const std::vector<ForecastSubmission>& submissions,
                             const ScoringRule& rule, MissingForecastPolicy policy) {
    return score_tournament(build_table(events, submissions, rule, policy));
}

std::vector<PairwiseComparison> margin_significance(const Leaderboard& leaderboard,
                                                    const TournamentTable& table) {
    std::map<std::string, Eigen::Index> column;
    for (Eigen::Index f = 0; f < table.n_forecasters(); ++f)
        column[table.forecaster_ids[static_cast<std::size_t>(f)]] = f;

    std::vector<PairwiseComparison> out;
    for (std::size_t i = 0; i + 1 < leaderboard.rows.size(); ++i) {
        const auto& upper = leaderboard.rows[i];
        const auto& lower = leaderboard.rows[i + 1];
        const PairStats stats =
            pair_stats(table, column.at(upper.forecaster_id), column.at(lower.forecaster_id));
        if (stats.common == 0)
            throw std::invalid_argument("forecasters " + upper.forecaster_id + " and " +
                                        lower.forecaster_id + " share no scored events");
        PairwiseComparison cmp;
        cmp.first = upper.forecaster_id;
        cmp.second = lower.forecaster_id;
        cmp.common_events = stats.common;
        cmp.delta = stats.delta;
        cmp.sigma_bound = stats.sigma_bound;
        cmp.approximate = stats.approximate;
        cmp.separated = std::abs(stats.delta) > 2.0 * stats.sigma_bound;
        out.push_back(std::move(cmp));
    }
    return out;
}

std::vector<RankInterval> rank_confidence(const Leaderboard& leaderboard,
                                          const TournamentTable& table) {
    if (leaderboard.rows.size() < 2)
        throw std::invalid_argument("rank confidence needs at least two forecasters");
    std::map<std::string, Eigen::Index> column;
    for (Eigen::Index f = 0; f < table.n_forecasters(); ++f)
        column[table.forecaster_ids[static_cast<std::size_t>(f)]] = f;

    std::vector<RankInterval> out;
    out.reserve(leaderboard.rows.size());
    for (const auto& row : leaderboard.rows) {
        RankInterval interval;
        interval.forecaster_id = row.forecaster_id;
        interval.rank = row.rank;
        int reachable_above = 0;
        int reachable_below = 0;
        for (const auto& rival : leaderboard.rows) {
            if (rival.forecaster_id == row.forecaster_id) continue;
            if (row_equal_score(row, rival)) continue;  // already share the rank
            const PairStats stats = pair_stats(table, column.at(row.forecaster_id),
                                               column.at(rival.forecaster_id));
            if (stats.common == 0) continue;  // no shared evidence, no reachable swap
            const double gap = std::abs(stats.delta);
            const bool within = !std::isnan(gap) && gap <= 2.0 * stats.sigma_bound;
            if (!within) continue;
            if (row_better(rival, row))
                ++reachable_above;
            else
                ++reachable_below;
        }
        interval.best_rank = row.rank - reachable_above;
        interval.worst_rank = row.rank + reachable_below;
        out.push_back(std::move(interval));
    }
    return out;
}

BinaryRecord binary_record_for(const std::vector<EventRecord>& events,
                               const std::vector<ForecastSubmission>& submissions,
                               const std::string& forecaster_id) {
    std::map<std::string, const EventRecord*> by_id;
    for (const auto& event : events) by_id[event.event_id] = &event;

    struct Entry {
        const EventRecord* event;
        double q;
    };
    std::vector<Entry> entries;
    for (const auto& sub : submissions) {
        if (sub.forecaster_id != forecaster_id) continue;
        const auto it = by_id.find(sub.event_id);
        if (it == by_id.end())
            throw std::invalid_argument("submission for unknown event " + sub.event_id);
        const EventRecord* event = it->second;
        if (!event->resolved()) continue;
        if (event->categories != 2)
            throw std::invalid_argument(
                "event " + event->event_id + " has " + std::to_string(event->categories) +
                " categories; score decompositions need binary events (k=2)");
        entries.push_back({event, sub.forecast[1]});
    }
    if (entries.empty())
        throw std::invalid_argument("no resolved binary submissions for forecaster '" +
                                    forecaster_id + "'");
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return event_order(*a.event, *b.event); });

    BinaryRecord record;
    record.forecasts.resize(static_cast<Eigen::Index>(entries.size()));
    record.outcomes.resize(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        record.event_ids.push_back(entries[i].event->event_id);
        record.forecasts[static_cast<Eigen::Index>(i)] = entries[i].q;
        record.outcomes[static_cast<Eigen::Index>(i)] =
            *entries[i].event->outcome == 1 ? 1 : 0;
    }
    record.validate();
    return record;
}

}  // namespace scorecast
