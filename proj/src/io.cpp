#include "ratings/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace ratings {

namespace {

std::string_view trim(std::string_view sv) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t' || sv.front() == '\r'))
        sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
        sv.remove_suffix(1);
    return sv;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& message) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + message);
}

// Split a CSV line into exactly `count` trimmed fields.
std::vector<std::string_view> fields(std::string_view line, std::size_t count,
                                     const std::string& source, std::size_t lineno) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= line.size(); ++k) {
        if (k == line.size() || line[k] == ',') {
            out.push_back(trim(line.substr(start, k - start)));
            start = k + 1;
        }
    }
    if (out.size() != count)
        fail(source, lineno,
             "expected " + std::to_string(count) + " comma-separated fields, got " +
                 std::to_string(out.size()));
    return out;
}

double parse_double(std::string_view sv, const std::string& source, std::size_t lineno,
                    const std::string& what) {
    double value = 0.0;
    const auto* end = sv.data() + sv.size();
    const auto [ptr, ec] = std::from_chars(sv.data(), end, value);
    if (ec != std::errc() || ptr != end)
        fail(source, lineno, "cannot parse " + what + " '" + std::string(sv) + "'");
    return value;
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

std::vector<GameRecord> read_games(std::istream& in, const std::string& source) {
    std::vector<GameRecord> games;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto f = fields(line, 3, source, lineno);
        if (f[0].empty() || f[1].empty()) fail(source, lineno, "empty player name");
        if (f[0] == f[1])
            fail(source, lineno, "player '" + std::string(f[0]) + "' paired with themselves");
        double score;
        if (f[2] == "1")
            score = 1.0;
        else if (f[2] == "0")
            score = 0.0;
        else if (f[2] == "0.5" || f[2] == "=")
            score = 0.5;
        else
            fail(source, lineno,
                 "result '" + std::string(f[2]) + "' is not one of 1, 0, 0.5, =");
        games.push_back({std::string(f[0]), std::string(f[1]), score});
    }
    if (in.bad()) throw ParseError(source + ": read error");
    return games;
}

std::vector<GameRecord> read_games_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open games file '" + path + "'");
    return read_games(in, path);
}

void write_games(std::ostream& out, std::span<const GameRecord> games,
                 std::span<const std::string> header_comments) {
    for (const auto& comment : header_comments) out << "# " << comment << '\n';
    for (const auto& g : games) {
        out << g.player_a << ',' << g.player_b << ',';
        if (g.score_a == 1.0)
            out << '1';
        else if (g.score_a == 0.5)
            out << "0.5";
        else
            out << '0';
        out << '\n';
    }
}

std::vector<PriorRating> read_priors(std::istream& in, const std::string& source) {
    std::vector<PriorRating> priors;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        const auto f = fields(line, 3, source, lineno);
        if (f[0].empty()) fail(source, lineno, "empty player name");
        PriorRating p;
        p.player = std::string(f[0]);
        p.r_hat = parse_double(f[1], source, lineno, "rating");
        p.w_hat = parse_double(f[2], source, lineno, "weight");
        if (p.w_hat < 0.0) fail(source, lineno, "weight must be >= 0");
        priors.push_back(std::move(p));
    }
    if (in.bad()) throw ParseError(source + ": read error");
    return priors;
}

std::vector<PriorRating> read_priors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open priors file '" + path + "'");
    return read_priors(in, path);
}

void write_truth(std::ostream& out, std::span<const std::string> players,
                 std::span<const double> ratings) {
    char buf[64];
    for (std::size_t i = 0; i < players.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", ratings[i]);
        out << players[i] << ',' << buf << '\n';
    }
}

}  // namespace ratings
