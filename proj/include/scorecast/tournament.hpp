#pragma once

#include <scorecast/forecast.hpp>
#include <scorecast/rules.hpp>
#include <scorecast/verification.hpp>

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scorecast {

/// One forecastable event. `outcome` stays empty until the event resolves.
struct EventRecord {
    std::string event_id;
    int round = 0;
    Eigen::Index categories = 2;
    std::optional<Eigen::Index> outcome;

    bool resolved() const { return outcome.has_value(); }
};

/// One forecaster's probabilities for one event. A forecaster gets a single
/// submission per event; later duplicates are rejected at ingestion.
struct ForecastSubmission {
    std::string forecaster_id;
    std::string event_id;
    Forecast forecast;
    int round = 0;  ///< the event's round, filled at ingestion
};

struct ValidationIssue {
    std::string source;  ///< which input ("events", "forecasts", "records")
    long line = 0;       ///< 1-based line number; 0 when not line-specific
    std::string message;
};

struct IngestResult {
    std::vector<EventRecord> events;
    std::vector<ForecastSubmission> submissions;
    std::vector<ValidationIssue> issues;  ///< every rejected row, itemized
};

/// Comma-separated pair of files. Events: header `event_id,round,k,outcome`
/// with outcome left empty while unresolved. Forecasts: header
/// `forecaster_id,event_id,probs` with semicolon-separated probabilities in
/// the third column. Bad rows are collected in `issues`, never silently
/// dropped; unreadable files and bad headers throw.
IngestResult ingest_csv(std::istream& events_in, std::istream& forecasts_in);
IngestResult ingest_csv_files(const std::string& events_path, const std::string& forecasts_path);

/// One JSON object per line, same fields as the CSV formats: events carry
/// event_id/round/k and optionally outcome; forecasts carry
/// forecaster_id/event_id/probs (an array). Order does not matter.
IngestResult ingest_jsonl(std::istream& in);
IngestResult ingest_jsonl_file(const std::string& path);

/// What to do when a forecaster skipped a resolved event.
enum class MissingForecastPolicy {
    ImputeUniform,  ///< score the uniform forecast in their place, marked imputed
    Strict,         ///< leave the event out of that forecaster's record
};

/// Multicategory scoring rule for tournament play. Binary-only rules carry
/// max_categories = 2 and reject events with more categories.
struct ScoringRule {
    std::string name;
    Eigen::Index max_categories = 0;  ///< 0 = unlimited
    std::function<double(const Forecast&, Outcome)> score;
};

/// "brier" and "log" accept any K; "spherical", "elliptical" and "poisson"
/// are binary-only and read q as the forecast probability of category 1.
ScoringRule make_rule(const std::string& name, double alpha = 0.5,
                      LogZeroPolicy log_zero = LogZeroPolicy::NegInfinity);

/// Fully scored tournament: resolved events in resolution order (round,
/// then event id), forecasters sorted by id, and the forecast/score cell
/// for every (event, forecaster). Cells skipped under the Strict policy
/// hold no forecast and a NaN score.
struct TournamentTable {
    std::vector<EventRecord> events;  ///< resolved, in resolution order
    std::vector<std::string> forecaster_ids;
    std::vector<std::vector<std::optional<Forecast>>> forecasts;  ///< [event][forecaster]
    std::vector<std::vector<bool>> imputed;
    Eigen::MatrixXd scores;  ///< events x forecasters, NaN where skipped
    std::string rule_name;

    Eigen::Index n_events() const { return static_cast<Eigen::Index>(events.size()); }
    Eigen::Index n_forecasters() const {
        return static_cast<Eigen::Index>(forecaster_ids.size());
    }
};

TournamentTable build_table(const std::vector<EventRecord>& events,
                            const std::vector<ForecastSubmission>& submissions,
                            const ScoringRule& rule,
                            MissingForecastPolicy policy = MissingForecastPolicy::ImputeUniform);

struct TrajectoryPoint {
    std::string event_id;
    double score;  ///< NaN when skipped
    bool imputed = false;
    bool skipped = false;
    double cumulative_mean;  ///< mean over events scored so far
};

struct LeaderboardRow {
    std::string forecaster_id;
    Eigen::Index events_scored = 0;
    double mean_score = 0.0;
    int rank = 1;  ///< competition ranking: ties share, next rank skips
    std::optional<double> margin_to_next;  ///< gap to the next strictly lower mean
    double band_low = 0.0;   ///< mean - 2 * max pairwise sigma bound
    double band_high = 0.0;  ///< mean + 2 * max pairwise sigma bound
    std::vector<TrajectoryPoint> trajectory;  ///< one point per resolved event
};

struct Leaderboard {
    std::vector<LeaderboardRow> rows;  ///< rank order, ties broken by forecaster id
};

Leaderboard score_tournament(const TournamentTable& table);
Leaderboard score_tournament(const std::vector<EventRecord>& events,
                             const std::vector<ForecastSubmission>& submissions,
                             const ScoringRule& rule,
                             MissingForecastPolicy policy = MissingForecastPolicy::ImputeUniform);

/// Score-difference test for one pair, on the events both entered.
/// `sigma_bound` is the distribution-free bound on the standard deviation
/// of `delta`; it is exact for binary Brier play and flagged approximate
/// otherwise. A pair is separated when |delta| exceeds twice the bound;
/// equality is not separation.
struct PairwiseComparison {
    std::string first;   ///< the higher-ranked of the pair
    std::string second;
    Eigen::Index common_events = 0;
    double delta = 0.0;  ///< mean score difference, first minus second
    double sigma_bound = 0.0;
    bool approximate = false;
    bool separated = false;
};

/// Comparisons for each adjacent pair in leaderboard order. Throws when an
/// adjacent pair has no events in common.
std::vector<PairwiseComparison> margin_significance(const Leaderboard& leaderboard,
                                                    const TournamentTable& table);

/// Range of ranks reachable by a two-sigma shift of the pairwise score
/// differences: rivals whose gap is within twice the pair bound (closed
/// inequality) could swap places with this forecaster.
struct RankInterval {
    std::string forecaster_id;
    int rank = 1;
    int best_rank = 1;
    int worst_rank = 1;
};

std::vector<RankInterval> rank_confidence(const Leaderboard& leaderboard,
                                          const TournamentTable& table);

/// Binary record of one forecaster's resolved submissions, for the score
/// decompositions. Every submitted resolved event must be binary; q is the
/// forecast probability of category 1.
BinaryRecord binary_record_for(const std::vector<EventRecord>& events,
                               const std::vector<ForecastSubmission>& submissions,
                               const std::string& forecaster_id);

}  // namespace scorecast
