#include <scorecast/verification.hpp>

#include <scorecast/rules.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace scorecast {

void BinaryRecord::validate() const {
    if (forecasts.size() == 0) throw std::invalid_argument("binary record is empty");
    if (outcomes.size() != forecasts.size())
        throw std::invalid_argument("binary record has mismatched forecast/outcome lengths");
    if (!event_ids.empty() && static_cast<Eigen::Index>(event_ids.size()) != forecasts.size())
        throw std::invalid_argument("binary record has mismatched id count");
    for (Eigen::Index i = 0; i < forecasts.size(); ++i) {
        detail::check_probability(forecasts[i], "forecast");
        detail::check_indicator(outcomes[i]);
    }
}

BinaryRecord BinaryRecord::from(Eigen::ArrayXd forecasts, Eigen::ArrayXi outcomes) {
    BinaryRecord record;
    record.forecasts = std::move(forecasts);
    record.outcomes = std::move(outcomes);
    record.event_ids.reserve(static_cast<std::size_t>(record.forecasts.size()));
    for (Eigen::Index i = 0; i < record.forecasts.size(); ++i)
        record.event_ids.push_back(std::to_string(i));
    record.validate();
    return record;
}

double mean_brier(const BinaryRecord& record) {
    record.validate();
    const Eigen::ArrayXd x = record.outcomes.cast<double>();
    return -(x - record.forecasts).square().mean();
}

BinningPolicy BinningPolicy::edges(std::vector<double> edges) {
    if (edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
    if (!std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("bin edges must be ascending");
    if (edges.front() > 0.0 || edges.back() < 1.0)
        throw std::invalid_argument("bin edges must span [0,1]");
    BinningPolicy policy;
    policy.kind = Kind::Edges;
    policy.edge_list = std::move(edges);
    return policy;
}

namespace {

std::string format_edge_label(double lo, double hi, bool last) {
    std::ostringstream out;
    out << "[" << lo << "," << hi << (last ? "]" : ")");
    return out.str();
}

}  // namespace

MurphyReport murphy_decompose(const BinaryRecord& record, const BinningPolicy& binning) {
    record.validate();
    const Eigen::Index n = record.size();
    const double nn = static_cast<double>(n);

    struct Accum {
        std::string label;
        Eigen::Index count = 0;
        double forecast_sum = 0.0;
        Eigen::Index trues = 0;
    };
    std::map<Eigen::Index, Accum> by_key;  // bin index (Edges) or rank of value (ByValue)

    if (binning.kind == BinningPolicy::Kind::ByValue) {
        std::vector<double> values(record.forecasts.data(), record.forecasts.data() + n);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double q = record.forecasts[i];
            const auto it = std::lower_bound(values.begin(), values.end(), q);
            const Eigen::Index key = it - values.begin();
            Accum& acc = by_key[key];
            if (acc.count == 0) {
                std::ostringstream label;
                label << "q=" << q;
                acc.label = label.str();
            }
            acc.count += 1;
            acc.forecast_sum += q;
            acc.trues += record.outcomes[i];
        }
    } else {
        const auto& edges = binning.edge_list;
        const Eigen::Index n_bins = static_cast<Eigen::Index>(edges.size()) - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double q = record.forecasts[i];
            // half-open bins [e_k, e_{k+1}), last bin closed at 1
            auto it = std::upper_bound(edges.begin(), edges.end(), q);
            Eigen::Index key = std::min<Eigen::Index>(it - edges.begin() - 1, n_bins - 1);
            key = std::max<Eigen::Index>(key, 0);
            Accum& acc = by_key[key];
            if (acc.count == 0)
                acc.label = format_edge_label(edges[static_cast<std::size_t>(key)],
                                              edges[static_cast<std::size_t>(key) + 1],
                                              key == n_bins - 1);
            acc.count += 1;
            acc.forecast_sum += q;
            acc.trues += record.outcomes[i];
        }
    }

    MurphyReport report;
    const double f = static_cast<double>(record.outcomes.sum()) / nn;
    report.overall_frequency = f;
    report.uncertainty = f * (1.0 - f);
    report.resolution = 0.0;
    report.reliability = 0.0;
    report.bins.reserve(by_key.size());
    for (const auto& [key, acc] : by_key) {
        (void)key;
        BinStats bin;
        bin.label = acc.label;
        bin.count = acc.count;
        bin.representative_forecast = acc.forecast_sum / static_cast<double>(acc.count);
        bin.observed_frequency = static_cast<double>(acc.trues) / static_cast<double>(acc.count);
        const double w = static_cast<double>(acc.count) / nn;
        report.resolution += w * (f - bin.observed_frequency) * (f - bin.observed_frequency);
        report.reliability += w * (bin.representative_forecast - bin.observed_frequency) *
                              (bin.representative_forecast - bin.observed_frequency);
        report.bins.push_back(std::move(bin));
    }
    report.mean_brier = mean_brier(record);
    report.residual = report.mean_brier - report.reconstruction();
    return report;
}

ClimatologyReport climatology_decompose(const BinaryRecord& record, double base_frequency) {
    record.validate();
    detail::check_probability(base_frequency, "base frequency");
    const double nn = static_cast<double>(record.size());
    const Eigen::ArrayXd x = record.outcomes.cast<double>();

    ClimatologyReport report;
    report.base_frequency = base_frequency;
    report.epsilons = record.forecasts - base_frequency;
    report.base_term = -base_frequency * (1.0 - base_frequency);
    report.gain_term = 2.0 * (report.epsilons * (x - base_frequency)).sum() / nn;
    report.stake_term = report.epsilons.square().sum() / nn;

    const double eps_norm = std::sqrt(report.epsilons.square().sum());
    if (eps_norm > 0.0) {
        report.directions = report.epsilons / eps_norm;
        report.optimal_scale = (report.directions * (x - base_frequency)).sum();
    } else {
        report.directions = Eigen::ArrayXd::Zero(record.size());
        report.optimal_scale = 0.0;
    }
    report.mean_brier = mean_brier(record);
    report.residual = report.mean_brier -
                      (report.base_term + report.gain_term - report.stake_term);
    return report;
}

double optimal_backing(const BinaryRecord& record, double base_frequency,
                       const Eigen::ArrayXd& gammas) {
    record.validate();
    detail::check_probability(base_frequency, "base frequency");
    if (gammas.size() != record.size())
        throw std::invalid_argument("direction vector length must match the record");
    const double norm_sq = gammas.square().sum();
    if (std::abs(norm_sq - 1.0) > 1e-9)
        throw std::invalid_argument("direction vector must have unit norm, got |gamma|^2 = " +
                                    std::to_string(norm_sq));
    return (gammas * (record.outcomes.cast<double>() - base_frequency)).sum();
}

double skill_score(double score, double baseline_score) {
    if (!(baseline_score < 0.0))
        throw std::invalid_argument("baseline score must be negative, got " +
                                    std::to_string(baseline_score));
    return (score - baseline_score) / -baseline_score;
}

double climatology_baseline_binary(double f) {
    detail::check_probability(f, "base frequency");
    return -f * (1.0 - f);
}

double climatology_baseline_multicat(const Forecast& freqs) {
    return -0.5 * (1.0 - freqs.probs().squaredNorm());
}

}  // namespace scorecast
