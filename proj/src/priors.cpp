#include "ratings/priors.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ratings {

bool PriorTable::any() const {
    for (double w : w_hat)
        if (w > 0.0) return true;
    return false;
}

PriorTable merge_priors(const ScoreMatrix& s, std::span<const PriorRating> priors,
                        double discount, UnknownPrior policy) {
    if (!(discount >= 0.0) || !std::isfinite(discount))
        throw std::invalid_argument("prior discount must be finite and >= 0");

    PriorTable t;
    t.x_hat.assign(static_cast<std::size_t>(s.n()), 1.0);
    t.w_hat.assign(static_cast<std::size_t>(s.n()), 0.0);

    std::unordered_set<std::string> seen;
    for (const auto& p : priors) {
        if (!seen.insert(p.player).second)
            throw std::invalid_argument("duplicate prior for player '" + p.player + "'");
        if (!std::isfinite(p.r_hat))
            throw std::invalid_argument("prior rating for '" + p.player + "' is not finite");
        if (!(p.w_hat >= 0.0) || !std::isfinite(p.w_hat))
            throw std::invalid_argument("prior weight for '" + p.player + "' must be finite and >= 0");

        const int i = s.index_of(p.player);
        if (i < 0) {
            if (policy == UnknownPrior::Error)
                throw std::invalid_argument("prior for unknown player '" + p.player + "'");
            t.unknown.push_back(p.player);
            continue;
        }
        t.x_hat[static_cast<std::size_t>(i)] = std::exp(p.r_hat);
        t.w_hat[static_cast<std::size_t>(i)] = discount * p.w_hat;
    }
    return t;
}

}  // namespace ratings
