#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ratings {

/// One game between two distinct players: `score_a` points went to
/// `player_a` (1 win, 0.5 draw, 0 loss); the opponent took the rest.
struct GameRecord {
    std::string player_a;
    std::string player_b;
    double score_a = 0.0;
};

inline bool valid_score(double s) { return s == 0.0 || s == 0.5 || s == 1.0; }

/// Sparse aggregate of results: entry (i, j) is the total number of points
/// player i took from player j. Off-diagonal only; zero entries are not
/// stored. Kept in CSR form together with its transpose so a sweep can read
/// both the points a player won and the points they conceded in ascending
/// column order.
class ScoreMatrix {
public:
    struct Entry {
        int row = 0;
        int col = 0;
        double points = 0.0;
    };

    struct RowView {
        std::span<const int> cols;
        std::span<const double> vals;
        std::size_t size() const { return cols.size(); }
    };

    ScoreMatrix() = default;

    int n() const { return n_; }
    std::int64_t games() const { return games_; }
    std::size_t nonzeros() const { return values_.size(); }

    const std::vector<std::string>& players() const { return players_; }
    const std::string& player(int i) const { return players_[static_cast<std::size_t>(i)]; }
    /// Index of a player name, or -1 when unknown.
    int index_of(const std::string& name) const;

    /// s_{i,j}: points i took from j; 0 when no entry is stored.
    double score(int i, int j) const;
    /// g_{i,j} = s_{i,j} + s_{j,i}: games played between i and j.
    double games_between(int i, int j) const { return score(i, j) + score(j, i); }

    RowView row(int i) const;             // s_{i,*}, ascending column
    RowView row_transposed(int i) const;  // s_{*,i}, ascending column

    double points_for(int i) const;      // total points scored by i
    double points_against(int i) const;  // total points conceded by i
    double games_of(int i) const { return points_for(i) + points_against(i); }

    /// Build directly from per-pair point totals (tests, benchmarks).
    /// Duplicate (row, col) entries are summed; zero totals are dropped.
    /// total_games < 0 infers the game count from the sum of all points.
    static ScoreMatrix from_entries(std::vector<std::string> players,
                                    std::span<const Entry> entries,
                                    std::int64_t total_games = -1);

private:
    int n_ = 0;
    std::int64_t games_ = 0;
    std::vector<std::string> players_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::int64_t> row_ptr_, trow_ptr_;
    std::vector<int> col_, tcol_;
    std::vector<double> values_, tvalues_;

    void build_csr(std::vector<Entry>&& entries);

    friend ScoreMatrix aggregate(std::span<const GameRecord> games);
};

/// Sum a game log into a ScoreMatrix. Players are indexed in order of first
/// appearance, so a fixed input file always yields the same indexing.
/// Rejects self-games and scores outside {0, 0.5, 1}.
ScoreMatrix aggregate(std::span<const GameRecord> games);

/// Raw points conceded per player: entry i is sum_{j != i} s_{j,i}.
std::vector<double> loss_totals(const ScoreMatrix& s);

}  // namespace ratings
