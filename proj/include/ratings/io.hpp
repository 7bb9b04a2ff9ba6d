#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratings/model.hpp"
#include "ratings/priors.hpp"

namespace ratings {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Games CSV: one game per line, `player_a,player_b,result` with result in
// {1, 0, 0.5, =} ('=' is a draw). Lines starting with '#' are comments;
// blank lines are skipped. Player names may not contain commas.
std::vector<GameRecord> read_games(std::istream& in, const std::string& source);
std::vector<GameRecord> read_games_file(const std::string& path);
void write_games(std::ostream& out, std::span<const GameRecord> games,
                 std::span<const std::string> header_comments = {});

// Priors CSV: `player,rating,weight` with the rating on the internal log
// scale (the CLI converts from the display scale when asked to).
std::vector<PriorRating> read_priors(std::istream& in, const std::string& source);
std::vector<PriorRating> read_priors_file(const std::string& path);

// Truth sidecar CSV: `player,rating` on the internal log scale.
void write_truth(std::ostream& out, std::span<const std::string> players,
                 std::span<const double> ratings);

}  // namespace ratings
