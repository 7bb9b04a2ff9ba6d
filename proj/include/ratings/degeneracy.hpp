#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ratings/model.hpp"

namespace ratings {

enum class Verdict { Nondegenerate, Degenerate };

/// Structural diagnosis of the score digraph (arc i -> j when s_{i,j} > 0).
/// Finite comparable ratings require every player to have conceded points
/// and the digraph to be strongly connected; anything else is degenerate.
struct DegeneracyReport {
    Verdict verdict = Verdict::Degenerate;
    std::vector<int> zero_loss_players;                   // conceded nothing
    std::vector<std::vector<int>> components;             // SCC partition of 0..n-1
    std::vector<std::pair<int, int>> condensation_edges;  // component -> component
    std::vector<std::string> reasons;

    bool nondegenerate() const { return verdict == Verdict::Nondegenerate; }
};

/// Strong connectivity is computed on the pattern of S alone; the damping
/// diagonal and any dummy player are remedies, not part of the diagnosis.
DegeneracyReport analyze(const ScoreMatrix& s);

/// What to do about a degenerate data set: rate the listed groups
/// separately, or regularize with a dummy player of the suggested weight.
struct Remediation {
    bool action_needed = false;
    std::vector<std::vector<int>> split_groups;
    double suggested_gamma = 0.0;
    std::string text;
};

Remediation recommend(const DegeneracyReport& report, const ScoreMatrix& s);

std::string report_text(const DegeneracyReport& report, const ScoreMatrix& s);
void report_kv(std::ostream& os, const DegeneracyReport& report, const ScoreMatrix& s);

}  // namespace ratings
