#include <scorecast/simulate.hpp>

#include <scorecast/rng.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scorecast {

ForecasterSpec ForecasterSpec::savant() {
    ForecasterSpec spec;
    spec.kind = Kind::Savant;
    spec.label = "savant";
    return spec;
}

ForecasterSpec ForecasterSpec::offset(double delta, bool random_sign) {
    ForecasterSpec spec;
    spec.kind = Kind::Offset;
    spec.delta = delta;
    spec.random_sign = random_sign;
    spec.label = "offset(" + std::to_string(delta) + (random_sign ? ",random-sign)" : ")");
    return spec;
}

ForecasterSpec ForecasterSpec::uniform() {
    ForecasterSpec spec;
    spec.kind = Kind::Uniform;
    spec.label = "uniform";
    return spec;
}

ForecasterSpec ForecasterSpec::noise(double sigma) {
    ForecasterSpec spec;
    spec.kind = Kind::Noise;
    spec.sigma = sigma;
    spec.label = "noise(" + std::to_string(sigma) + ")";
    return spec;
}

void SimConfig::validate() const {
    if (n_questions < 1) throw std::invalid_argument("need at least one question");
    if (n_replicates < 1) throw std::invalid_argument("need at least one replicate");
    if (true_p.size() != 1 && true_p.size() != n_questions)
        throw std::invalid_argument("true_p must have one entry or one per question");
    for (Eigen::Index i = 0; i < true_p.size(); ++i)
        detail::check_probability(true_p[i], "true probability");
    if (forecasters.empty()) throw std::invalid_argument("need at least one forecaster");
    for (const auto& spec : forecasters) {
        if (spec.kind == ForecasterSpec::Kind::Noise && spec.sigma < 0.0)
            throw std::invalid_argument("noise sigma must be nonnegative");
    }
    make_binary_rule(rule, alpha);  // rejects unknown rule names and bad alpha early
}

Eigen::ArrayXd SimConfig::expanded_true_p() const {
    if (true_p.size() == n_questions) return true_p;
    return Eigen::ArrayXd::Constant(n_questions, true_p[0]);
}

std::vector<SimResult::Summary> SimResult::summaries() const {
    std::vector<Summary> out;
    out.reserve(labels.size());
    const double n = static_cast<double>(n_replicates());
    for (Eigen::Index f = 0; f < n_forecasters(); ++f) {
        Summary s;
        s.label = labels[static_cast<std::size_t>(f)];
        const auto col = mean_scores.col(f);
        s.mean = col.mean();
        s.stddev = n > 1 ? std::sqrt((col.array() - s.mean).square().sum() / (n - 1.0)) : 0.0;
        s.min = col.minCoeff();
        s.max = col.maxCoeff();
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

double clip01(double q, long& clipped) {
    if (q < 0.0) {
        ++clipped;
        return 0.0;
    }
    if (q > 1.0) {
        ++clipped;
        return 1.0;
    }
    return q;
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
    config.validate();
    const Eigen::Index n_q = config.n_questions;
    const Eigen::Index n_rep = config.n_replicates;
    const Eigen::Index n_fc = static_cast<Eigen::Index>(config.forecasters.size());
    const Eigen::ArrayXd true_p = config.expanded_true_p();
    const auto score = make_binary_rule(config.rule, config.alpha, config.log_zero);

    // Forecasts that do not depend on the replicate are computed once.
    Eigen::MatrixXd static_q(n_q, n_fc);
    std::vector<bool> is_static(static_cast<std::size_t>(n_fc), true);
    std::vector<long> clip_counts(static_cast<std::size_t>(n_fc), 0);
    for (Eigen::Index f = 0; f < n_fc; ++f) {
        const auto& spec = config.forecasters[static_cast<std::size_t>(f)];
        switch (spec.kind) {
            case ForecasterSpec::Kind::Savant:
                static_q.col(f) = true_p.matrix();
                break;
            case ForecasterSpec::Kind::Uniform:
                static_q.col(f).setConstant(0.5);
                break;
            case ForecasterSpec::Kind::Offset:
                if (!spec.random_sign) {
                    long clipped = 0;
                    for (Eigen::Index i = 0; i < n_q; ++i)
                        static_q(i, f) = clip01(true_p[i] + spec.delta, clipped);
                    clip_counts[static_cast<std::size_t>(f)] =
                        clipped * static_cast<long>(n_rep);
                } else {
                    is_static[static_cast<std::size_t>(f)] = false;
                }
                break;
            case ForecasterSpec::Kind::Noise:
                is_static[static_cast<std::size_t>(f)] = false;
                break;
        }
    }

    SimResult result;
    result.seed = config.seed;
    result.labels.reserve(static_cast<std::size_t>(n_fc));
    for (const auto& spec : config.forecasters) result.labels.push_back(spec.label);
    result.mean_scores.resize(n_rep, n_fc);

    Eigen::ArrayXi outcomes(n_q);
    Eigen::ArrayXd q_buf(n_q);
    for (Eigen::Index r = 0; r < n_rep; ++r) {
        const std::uint64_t rep_seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
        Rng outcome_rng(derive_seed(rep_seed, 0));
        for (Eigen::Index i = 0; i < n_q; ++i)
            outcomes[i] = outcome_rng.bernoulli(true_p[i]) ? 1 : 0;

        for (Eigen::Index f = 0; f < n_fc; ++f) {
            const auto& spec = config.forecasters[static_cast<std::size_t>(f)];
            const double* q = nullptr;
            if (is_static[static_cast<std::size_t>(f)]) {
                q = static_q.col(f).data();
            } else {
                Rng noise_rng(derive_seed(rep_seed, static_cast<std::uint64_t>(f) + 1));
                long clipped = 0;
                if (spec.kind == ForecasterSpec::Kind::Offset) {
                    for (Eigen::Index i = 0; i < n_q; ++i) {
                        const double sign = noise_rng.bernoulli(0.5) ? 1.0 : -1.0;
                        q_buf[i] = clip01(true_p[i] + sign * spec.delta, clipped);
                    }
                } else {  // Noise
                    for (Eigen::Index i = 0; i < n_q; ++i)
                        q_buf[i] = clip01(true_p[i] + spec.sigma * noise_rng.normal(), clipped);
                }
                clip_counts[static_cast<std::size_t>(f)] += clipped;
                q = q_buf.data();
            }
            double sum = 0.0;
            for (Eigen::Index i = 0; i < n_q; ++i) sum += score(q[i], outcomes[i]);
            result.mean_scores(r, f) = sum / static_cast<double>(n_q);
        }
    }

    result.beat = Eigen::MatrixXd::Zero(n_fc, n_fc);
    result.tie = Eigen::MatrixXd::Zero(n_fc, n_fc);
    for (Eigen::Index a = 0; a < n_fc; ++a) {
        for (Eigen::Index b = 0; b < n_fc; ++b) {
            if (a == b) {
                result.tie(a, b) = 1.0;
                continue;
            }
            long wins = 0;
            long ties = 0;
            for (Eigen::Index r = 0; r < n_rep; ++r) {
                const double diff = result.mean_scores(r, a) - result.mean_scores(r, b);
                if (std::isnan(diff)) {
                    ++ties;  // both -inf under the log rule
                } else if (diff > SimResult::kTieEpsilon) {
                    ++wins;
                } else if (diff >= -SimResult::kTieEpsilon) {
                    ++ties;
                }
            }
            result.beat(a, b) = static_cast<double>(wins) / static_cast<double>(n_rep);
            result.tie(a, b) = static_cast<double>(ties) / static_cast<double>(n_rep);
        }
    }

    result.clipped.resize(n_fc);
    for (Eigen::Index f = 0; f < n_fc; ++f)
        result.clipped[f] = static_cast<int>(clip_counts[static_cast<std::size_t>(f)]);
    return result;
}

double theoretical_beat_probability(double delta, double p, Eigen::Index n) {
    detail::check_probability(p, "true probability");
    if (n < 1) throw std::invalid_argument("need at least one question");
    if (p + delta < 0.0 || p + delta > 1.0)
        throw std::invalid_argument("offset forecast p + delta leaves [0,1]");
    if (delta == 0.0) return 0.5;
    const double spread = p * (1.0 - p);
    if (spread == 0.0) return 0.0;  // deterministic outcomes: the offset always loses
    const double z = -std::abs(delta) * std::sqrt(static_cast<double>(n)) /
                     (2.0 * std::sqrt(spread));
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace scorecast
