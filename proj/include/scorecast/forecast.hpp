#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace scorecast {

/// Probability vector over K >= 2 outcome categories.
///
/// Construction validates: every entry in [0, 1], and the entries must sum
/// to 1 within kSumTolerance. Inputs inside the tolerance are renormalized
/// exactly (so e.g. three entries of 0.3333333333333333 become exact
/// thirds); anything further off is rejected.
class Forecast {
public:
    static constexpr double kSumTolerance = 1e-6;

    explicit Forecast(Eigen::VectorXd probs) : probs_(std::move(probs)) {
        if (probs_.size() < 2)
            throw std::invalid_argument("forecast needs at least 2 categories, got " +
                                        std::to_string(probs_.size()));
        for (Eigen::Index k = 0; k < probs_.size(); ++k) {
            const double v = probs_[k];
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("forecast probability out of [0,1]: " +
                                            std::to_string(v));
        }
        const double sum = probs_.sum();
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw std::invalid_argument("forecast probabilities sum to " + std::to_string(sum) +
                                        ", expected 1 within " + std::to_string(kSumTolerance));
        probs_ /= sum;
    }

    Forecast(std::initializer_list<double> probs)
        : Forecast(Eigen::Map<const Eigen::VectorXd>(probs.begin(),
                                                     static_cast<Eigen::Index>(probs.size()))
                       .eval()) {}

    /// Equal probability on each of k categories.
    static Forecast uniform(Eigen::Index k) {
        return Forecast(Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
    }

    const Eigen::VectorXd& probs() const { return probs_; }
    Eigen::Index categories() const { return probs_.size(); }
    double operator[](Eigen::Index k) const { return probs_[k]; }

private:
    Eigen::VectorXd probs_;
};

/// Realized category index of one event.
struct Outcome {
    Eigen::Index index = 0;
};

}  // namespace scorecast
