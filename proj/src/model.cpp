#include "ratings/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ratings {

namespace {

// Merge a sorted (row, col, points) list in place: sum duplicates, drop
// exact-zero totals.
void coalesce(std::vector<ScoreMatrix::Entry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::size_t out = 0;
    for (std::size_t k = 0; k < entries.size();) {
        ScoreMatrix::Entry e = entries[k];
        std::size_t j = k + 1;
        while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) {
            e.points += entries[j].points;
            ++j;
        }
        if (e.points != 0.0) entries[out++] = e;
        k = j;
    }
    entries.resize(out);
}

}  // namespace

int ScoreMatrix::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

double ScoreMatrix::score(int i, int j) const {
    const auto begin = col_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto end = col_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_.begin())];
}

ScoreMatrix::RowView ScoreMatrix::row(int i) const {
    const auto b = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(i) + 1]);
    return {std::span(col_).subspan(b, e - b), std::span(values_).subspan(b, e - b)};
}

ScoreMatrix::RowView ScoreMatrix::row_transposed(int i) const {
    const auto b = static_cast<std::size_t>(trow_ptr_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(trow_ptr_[static_cast<std::size_t>(i) + 1]);
    return {std::span(tcol_).subspan(b, e - b), std::span(tvalues_).subspan(b, e - b)};
}

double ScoreMatrix::points_for(int i) const {
    double sum = 0.0;
    for (double v : row(i).vals) sum += v;
    return sum;
}

double ScoreMatrix::points_against(int i) const {
    double sum = 0.0;
    for (double v : row_transposed(i).vals) sum += v;
    return sum;
}

void ScoreMatrix::build_csr(std::vector<Entry>&& entries) {
    coalesce(entries);

    const auto nnz = entries.size();
    row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    col_.resize(nnz);
    values_.resize(nnz);
    for (const auto& e : entries) ++row_ptr_[static_cast<std::size_t>(e.row) + 1];
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n_); ++i) row_ptr_[i] += row_ptr_[i - 1];
    for (std::size_t k = 0; k < nnz; ++k) {
        col_[k] = entries[k].col;
        values_[k] = entries[k].points;
    }

    // Transpose by counting sort on the column index; within each transposed
    // row the source order (ascending row) is preserved.
    trow_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    tcol_.resize(nnz);
    tvalues_.resize(nnz);
    for (std::size_t k = 0; k < nnz; ++k) ++trow_ptr_[static_cast<std::size_t>(col_[k]) + 1];
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n_); ++i) trow_ptr_[i] += trow_ptr_[i - 1];
    std::vector<std::int64_t> cursor(trow_ptr_.begin(), trow_ptr_.end() - 1);
    for (int i = 0; i < n_; ++i) {
        for (auto k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
            const auto j = static_cast<std::size_t>(col_[static_cast<std::size_t>(k)]);
            const auto slot = static_cast<std::size_t>(cursor[j]++);
            tcol_[slot] = i;
            tvalues_[slot] = values_[static_cast<std::size_t>(k)];
        }
    }
}

ScoreMatrix ScoreMatrix::from_entries(std::vector<std::string> players,
                                      std::span<const Entry> entries,
                                      std::int64_t total_games) {
    ScoreMatrix s;
    s.n_ = static_cast<int>(players.size());
    s.players_ = std::move(players);
    for (int i = 0; i < s.n_; ++i) {
        if (!s.index_.emplace(s.players_[static_cast<std::size_t>(i)], i).second)
            throw std::invalid_argument("from_entries: duplicate player name '" +
                                        s.players_[static_cast<std::size_t>(i)] + "'");
    }
    double total_points = 0.0;
    std::vector<Entry> list(entries.begin(), entries.end());
    for (const auto& e : list) {
        if (e.row < 0 || e.row >= s.n_ || e.col < 0 || e.col >= s.n_)
            throw std::invalid_argument("from_entries: index out of range");
        if (e.row == e.col)
            throw std::invalid_argument("from_entries: diagonal entry for player '" +
                                        s.players_[static_cast<std::size_t>(e.row)] + "'");
        if (!(e.points >= 0.0) || !std::isfinite(e.points))
            throw std::invalid_argument("from_entries: negative or non-finite points");
        total_points += e.points;
    }
    s.build_csr(std::move(list));
    if (total_games >= 0) {
        s.games_ = total_games;
    } else {
        const double rounded = std::round(total_points);
        if (std::abs(total_points - rounded) > 1e-9)
            throw std::invalid_argument("from_entries: total points not a whole game count");
        s.games_ = static_cast<std::int64_t>(rounded);
    }
    return s;
}

ScoreMatrix aggregate(std::span<const GameRecord> games) {
    ScoreMatrix s;
    std::vector<ScoreMatrix::Entry> entries;
    entries.reserve(games.size() * 2);

    auto intern = [&s](const std::string& name) {
        auto [it, inserted] = s.index_.emplace(name, s.n_);
        if (inserted) {
            s.players_.push_back(name);
            ++s.n_;
        }
        return it->second;
    };

    std::size_t line = 0;
    for (const auto& g : games) {
        ++line;
        if (g.player_a == g.player_b)
            throw std::invalid_argument("game " + std::to_string(line) + ": player '" +
                                        g.player_a + "' paired with themselves");
        if (!valid_score(g.score_a))
            throw std::invalid_argument("game " + std::to_string(line) + ": score " +
                                        std::to_string(g.score_a) + " is not 0, 0.5 or 1");
        const int a = intern(g.player_a);
        const int b = intern(g.player_b);
        entries.push_back({a, b, g.score_a});
        entries.push_back({b, a, 1.0 - g.score_a});
    }
    s.games_ = static_cast<std::int64_t>(games.size());
    s.build_csr(std::move(entries));
    return s;
}

std::vector<double> loss_totals(const ScoreMatrix& s) {
    std::vector<double> out(static_cast<std::size_t>(s.n()), 0.0);
    for (int i = 0; i < s.n(); ++i) out[static_cast<std::size_t>(i)] = s.points_against(i);
    return out;
}

}  // namespace ratings
