#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ratings/degeneracy.hpp"
#include "ratings/model.hpp"
#include "ratings/priors.hpp"

namespace ratings {

enum class Variant { Iter1, Iter2 };

struct SolverConfig {
    double sigma = 0.3;      // damping diagonal; 0 is oscillation-prone
    double gamma = 0.0;      // dummy-player weight; regularizes degenerate data
    double epsilon = 1e-10;  // stop when the max relative change drops below this
    long max_iters = 100000;
    Variant variant = Variant::Iter1;
    double prior_discount = 1.0;  // forwarded to merge_priors by callers
    int threads = 1;              // 1 = serial reference; >1 bitwise-identical parallel
    bool allow_degenerate = false;
};

struct SolveResult {
    std::vector<double> x;  // strengths
    std::vector<double> r;  // ln x
    long iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  // expected minus actual weighted score
    double final_delta = 0.0;
    bool scale_anchored = false;        // gamma or priors pinned the scale
    std::vector<int> diverged_players;  // hit the divergence bounds
};

/// Custom start vector and per-iteration observer for instrumented runs.
struct SolveHooks {
    const std::vector<double>* start = nullptr;
    std::function<void(long k, std::span<const double> x, double delta)> on_iteration;
};

/// Thrown when the data is degenerate and neither gamma > 0 nor the
/// override is set: the iteration would push some ratings to +-infinity.
class DegenerateInput : public std::runtime_error {
public:
    DegenerateInput(const std::string& what, DegeneracyReport report);
    const DegeneracyReport& report() const { return report_; }

private:
    DegeneracyReport report_;
};

/// Rescale so the ratings sum to zero (geometric mean 1); ratios unchanged.
std::vector<double> normalize(std::span<const double> x);

/// max_i |next_i - prev_i| / next_i
double convergence_delta(std::span<const double> prev, std::span<const double> next);

/// Expected minus actual weighted score per player at strengths x, with
/// dummy and prior terms when present. The zero vector iff x solves the
/// rating equations exactly.
std::vector<double> consistency_residuals(const ScoreMatrix& s, std::span<const double> x,
                                          double gamma = 0.0,
                                          const PriorTable* priors = nullptr);

/// Damped fixed-point iteration from x = (1, ..., 1). Without gamma or
/// priors the scale is free: iterates are renormalized each step and the
/// result satisfies sum(ln x) = 0. With gamma or priors the equations pin
/// the scale, so iterates are left alone and the result keeps the anchored
/// scale. Convergence is measured on the iterates as produced.
/// Non-convergence is reported in the result, not thrown.
SolveResult solve(const ScoreMatrix& s, const SolverConfig& config,
                  const PriorTable* priors = nullptr, const SolveHooks* hooks = nullptr);

}  // namespace ratings
