#include "ratings/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace ratings {

namespace {

// 53-bit uniform in [0, 1); identical on every platform with the same seed.
double next_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

void check_spec(const TournamentSpec& spec) {
    if (spec.players < 2) throw std::invalid_argument("tournament: need at least 2 players");
    if (spec.true_ratings.size() != static_cast<std::size_t>(spec.players))
        throw std::invalid_argument("tournament: true_ratings size does not match players");
    for (double r : spec.true_ratings)
        if (!std::isfinite(r)) throw std::invalid_argument("tournament: ratings must be finite");
    if (!(spec.draw_prob >= 0.0) || !(spec.draw_prob < 1.0))
        throw std::invalid_argument("tournament: draw_prob must be in [0, 1)");
    if (spec.schedule == Schedule::RoundRobin && spec.rounds < 1)
        throw std::invalid_argument("tournament: rounds must be >= 1");
    if (spec.schedule == Schedule::RandomPairs && spec.games < 1)
        throw std::invalid_argument("tournament: games must be >= 1");
}

}  // namespace

double expected_score(double r_i, double r_j) { return 1.0 / (1.0 + std::exp(r_j - r_i)); }

double sample_game(double r_i, double r_j, double draw_prob, std::mt19937_64& rng) {
    const double u_draw = next_double(rng);
    if (u_draw < draw_prob) return 0.5;
    return next_double(rng) < expected_score(r_i, r_j) ? 1.0 : 0.0;
}

std::vector<GameRecord> generate(const TournamentSpec& spec) {
    check_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::vector<GameRecord> games;

    auto play = [&](int i, int j) {
        const double score = sample_game(spec.true_ratings[static_cast<std::size_t>(i)],
                                         spec.true_ratings[static_cast<std::size_t>(j)],
                                         spec.draw_prob, rng);
        games.push_back({player_name(i), player_name(j), score});
    };

    if (spec.schedule == Schedule::RoundRobin) {
        games.reserve(static_cast<std::size_t>(spec.rounds) * static_cast<std::size_t>(spec.players) *
                      static_cast<std::size_t>(spec.players - 1) / 2);
        for (long round = 0; round < spec.rounds; ++round)
            for (int i = 0; i < spec.players; ++i)
                for (int j = i + 1; j < spec.players; ++j) play(i, j);
    } else {
        games.reserve(static_cast<std::size_t>(spec.games));
        const auto n = static_cast<std::uint64_t>(spec.players);
        for (long g = 0; g < spec.games; ++g) {
            const auto i = static_cast<int>(next_below(rng, n));
            auto j = static_cast<int>(next_below(rng, n - 1));
            if (j >= i) ++j;
            play(std::min(i, j), std::max(i, j));
        }
    }
    return games;
}

RecoveryError recovery_error(std::span<const double> truth, std::span<const double> estimate) {
    if (truth.size() != estimate.size() || truth.empty())
        throw std::invalid_argument("recovery_error: size mismatch or empty input");
    double mt = 0.0, me = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        mt += truth[i];
        me += estimate[i];
    }
    mt /= static_cast<double>(truth.size());
    me /= static_cast<double>(truth.size());

    RecoveryError err;
    double sq = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = (estimate[i] - me) - (truth[i] - mt);
        err.max_abs = std::max(err.max_abs, std::abs(d));
        sq += d * d;
    }
    err.rmse = std::sqrt(sq / static_cast<double>(truth.size()));
    return err;
}

std::string player_name(int index) { return "P" + std::to_string(index + 1); }

}  // namespace ratings
