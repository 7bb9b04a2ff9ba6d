#pragma once

#include <span>
#include <vector>

#include "ratings/model.hpp"
#include "ratings/priors.hpp"

namespace ratings {

// One damped sweep of the ratio update: out[i] is the weighted points player
// i won over the weighted points they conceded, with the damping diagonal
// sigma, an optional dummy player of weight gamma pinned at strength 1, and
// optional per-player priors.
//
// Per-row accumulation order is fixed (score row in ascending column order,
// then conceded row in ascending column order), so the parallel variant is
// bitwise identical to the serial reference for any thread count: rows are
// partitioned, never reassociated.
//
// Throws std::invalid_argument when x has a non-positive or non-finite
// entry, and std::runtime_error naming the player whose update denominator
// is zero (no conceded points, sigma == 0, gamma == 0, no prior).
void step_iter1_serial(const ScoreMatrix& s, std::span<const double> x,
                       double sigma, double gamma, const PriorTable* priors,
                       std::span<double> out);
void step_iter1_parallel(const ScoreMatrix& s, std::span<const double> x,
                         double sigma, double gamma, const PriorTable* priors,
                         std::span<double> out, int threads);

// Variant sweep: total points won over weighted games played. Converges
// more slowly in practice; kept for comparison runs. Prior terms follow the
// same drawn-games pattern as the main sweep.
void step_iter2_serial(const ScoreMatrix& s, std::span<const double> x,
                       double sigma, double gamma, const PriorTable* priors,
                       std::span<double> out);
void step_iter2_parallel(const ScoreMatrix& s, std::span<const double> x,
                         double sigma, double gamma, const PriorTable* priors,
                         std::span<double> out, int threads);

// Allocating dispatchers; threads == 1 runs the serial reference.
std::vector<double> step_iter1(const ScoreMatrix& s, std::span<const double> x,
                               double sigma, double gamma,
                               const PriorTable* priors = nullptr, int threads = 1);
std::vector<double> step_iter2(const ScoreMatrix& s, std::span<const double> x,
                               double sigma, double gamma,
                               const PriorTable* priors = nullptr, int threads = 1);

}  // namespace ratings
