#include "ratings/degeneracy.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

namespace ratings {

namespace {

// Tarjan's strongly connected components, iterative so deep win chains
// cannot blow the call stack. Components come out in reverse topological
// order of the condensation; we re-sort afterwards anyway.
std::vector<std::vector<int>> strongly_connected_components(const ScoreMatrix& s) {
    const int n = s.n();
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            const auto vi = static_cast<std::size_t>(v);
            if (edge == 0) {
                index[vi] = lowlink[vi] = next_index++;
                stack.push_back(v);
                on_stack[vi] = true;
            }
            const auto cols = s.row(v).cols;
            bool descended = false;
            while (edge < cols.size()) {
                const int w = cols[edge++];
                const auto wi = static_cast<std::size_t>(w);
                if (index[wi] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[wi]) lowlink[vi] = std::min(lowlink[vi], index[wi]);
            }
            if (descended) continue;
            if (lowlink[vi] == index[vi]) {
                std::vector<int> component;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call.pop_back();
            if (!call.empty()) {
                const auto pi = static_cast<std::size_t>(call.back().v);
                lowlink[pi] = std::min(lowlink[pi], lowlink[vi]);
            }
        }
    }
    return components;
}

std::string name_list(const std::vector<int>& ids, const ScoreMatrix& s, std::size_t cap = 8) {
    std::string out;
    for (std::size_t k = 0; k < ids.size() && k < cap; ++k) {
        if (k) out += ", ";
        out += s.player(ids[k]);
    }
    if (ids.size() > cap) out += ", ... (" + std::to_string(ids.size()) + " total)";
    return out;
}

}  // namespace

DegeneracyReport analyze(const ScoreMatrix& s) {
    DegeneracyReport report;
    const int n = s.n();

    for (int i = 0; i < n; ++i)
        if (s.points_against(i) == 0.0) report.zero_loss_players.push_back(i);

    report.components = strongly_connected_components(s);
    std::sort(report.components.begin(), report.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<int> component_of(static_cast<std::size_t>(n), 0);
    for (std::size_t c = 0; c < report.components.size(); ++c)
        for (int v : report.components[c]) component_of[static_cast<std::size_t>(v)] = static_cast<int>(c);

    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        const int ci = component_of[static_cast<std::size_t>(i)];
        for (int j : s.row(i).cols) {
            const int cj = component_of[static_cast<std::size_t>(j)];
            if (ci != cj) edges.insert({ci, cj});
        }
    }
    report.condensation_edges.assign(edges.begin(), edges.end());

    if (!report.zero_loss_players.empty())
        report.reasons.push_back(std::to_string(report.zero_loss_players.size()) +
                                 " player(s) conceded no points: " +
                                 name_list(report.zero_loss_players, s));
    if (report.components.size() > 1)
        report.reasons.push_back("score digraph splits into " +
                                 std::to_string(report.components.size()) +
                                 " strongly connected components");
    if (n == 0) report.reasons.push_back("no players");

    report.verdict = report.reasons.empty() ? Verdict::Nondegenerate : Verdict::Degenerate;
    return report;
}

Remediation recommend(const DegeneracyReport& report, const ScoreMatrix& s) {
    Remediation rem;
    if (report.nondegenerate()) {
        rem.text = "no action needed";
        return rem;
    }
    rem.action_needed = true;
    rem.split_groups = report.components;
    rem.suggested_gamma = 1.0;

    std::ostringstream os;
    os << "either rate the groups separately:";
    for (const auto& group : rem.split_groups) os << "\n  - " << name_list(group, s);
    os << "\nor add a dummy draw against a fixed reference player (gamma = "
       << rem.suggested_gamma << ") to every rating";
    rem.text = os.str();
    return rem;
}

std::string report_text(const DegeneracyReport& report, const ScoreMatrix& s) {
    std::ostringstream os;
    os << "verdict: " << (report.nondegenerate() ? "nondegenerate" : "degenerate") << '\n';
    if (report.nondegenerate()) {
        os << "every player conceded points and the score digraph is strongly connected\n";
        return os.str();
    }
    for (const auto& reason : report.reasons) os << "reason: " << reason << '\n';
    if (report.components.size() > 1) {
        os << "components:\n";
        for (const auto& group : report.components) os << "  - " << name_list(group, s) << '\n';
        if (!report.condensation_edges.empty()) {
            os << "points flow between components only one way:\n";
            for (auto [from, to] : report.condensation_edges)
                os << "  group of " << s.player(report.components[static_cast<std::size_t>(from)].front())
                   << " -> group of " << s.player(report.components[static_cast<std::size_t>(to)].front())
                   << '\n';
        }
    }
    os << recommend(report, s).text << '\n';
    return os.str();
}

void report_kv(std::ostream& os, const DegeneracyReport& report, const ScoreMatrix& s) {
    os << "verdict=" << (report.nondegenerate() ? "nondegenerate" : "degenerate") << '\n';
    os << "players=" << s.n() << '\n';
    os << "components=" << report.components.size() << '\n';
    os << "zero_loss_players=";
    for (std::size_t k = 0; k < report.zero_loss_players.size(); ++k)
        os << (k ? "," : "") << s.player(report.zero_loss_players[k]);
    os << '\n';
    for (std::size_t c = 0; c < report.components.size(); ++c) {
        os << "component." << c << '=';
        for (std::size_t k = 0; k < report.components[c].size(); ++k)
            os << (k ? "," : "") << s.player(report.components[c][k]);
        os << '\n';
    }
    for (auto [from, to] : report.condensation_edges)
        os << "condensation_edge=" << from << "->" << to << '\n';
}

}  // namespace ratings
