#pragma once

#include <span>
#include <string>
#include <vector>

#include "ratings/model.hpp"

namespace ratings {

/// A carried-over rating: r_hat on the log scale used for output, acting as
/// w_hat drawn games against a fixed opponent of strength exp(r_hat).
/// w_hat == 0 means no prior and behaves exactly like an absent entry.
struct PriorRating {
    std::string player;
    double r_hat = 0.0;
    double w_hat = 0.0;
};

/// Priors aligned to matrix indices: x_hat[i] = exp(r_hat) (1 where absent),
/// w_hat[i] the discounted weight (0 where absent).
struct PriorTable {
    std::vector<double> x_hat;
    std::vector<double> w_hat;
    std::vector<std::string> unknown;  // prior names matching no player

    bool any() const;
};

enum class UnknownPrior { Warn, Error };

/// Align priors to the matrix, applying the age discount to every weight.
/// Unknown players are collected in the result (or rejected under
/// UnknownPrior::Error); a duplicate prior for one player is always rejected.
PriorTable merge_priors(const ScoreMatrix& s, std::span<const PriorRating> priors,
                        double discount, UnknownPrior policy = UnknownPrior::Warn);

}  // namespace ratings
