#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ratings/model.hpp"

namespace ratings {

enum class Schedule { RoundRobin, RandomPairs };

struct TournamentSpec {
    int players = 0;
    std::vector<double> true_ratings;  // log scale, size == players
    Schedule schedule = Schedule::RoundRobin;
    long rounds = 1;  // RoundRobin: each pair meets this many times
    long games = 0;   // RandomPairs: total games
    double draw_prob = 0.0;  // in [0, 1), independent of ratings
    std::uint64_t seed = 0;
};

/// Expected score of the first player: 1 / (1 + exp(r_j - r_i)).
double expected_score(double r_i, double r_j);

/// One sampled game for the first player: 0.5 with probability draw_prob,
/// else 1 with the logistic win probability and 0 otherwise.
double sample_game(double r_i, double r_j, double draw_prob, std::mt19937_64& rng);

/// Pure function of the spec (seed included). Round-robin rounds emit pairs
/// in lexicographic index order; random pairing draws uniformly over
/// distinct pairs. The lower-indexed player is always player_a.
std::vector<GameRecord> generate(const TournamentSpec& spec);

struct RecoveryError {
    double max_abs = 0.0;
    double rmse = 0.0;
};

/// Compare two rating vectors after centering both to mean zero, so the
/// free additive constant never counts as error.
RecoveryError recovery_error(std::span<const double> truth, std::span<const double> estimate);

/// Names used by generate(): "P1", "P2", ...
std::string player_name(int index);

}  // namespace ratings
