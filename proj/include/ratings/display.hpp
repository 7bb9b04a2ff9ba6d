#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace ratings {

/// Affine map from internal (log-scale) ratings to display points, rounded
/// to the nearest integer. The defaults make a 10:1 odds ratio worth 400
/// display points and center the pool at 2000.
struct DisplayScale {
    double alpha = 400.0 / std::numbers::ln10;
    double beta = 2000.0;
};

inline long display_rating(double r, const DisplayScale& scale) {
    return std::lround(scale.alpha * r + scale.beta);
}

inline double display_to_internal(double d, const DisplayScale& scale) {
    return (d - scale.beta) / scale.alpha;
}

inline std::vector<long> scale_ratings(std::span<const double> r, const DisplayScale& scale) {
    if (!(scale.alpha > 0.0)) throw std::invalid_argument("display scale: alpha must be > 0");
    std::vector<long> out;
    out.reserve(r.size());
    for (double v : r) out.push_back(display_rating(v, scale));
    return out;
}

}  // namespace ratings
