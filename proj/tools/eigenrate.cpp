// eigenrate: rate players from pairwise game results.
//
// Subcommands: rate (compute ratings), check (degeneracy analysis),
// verify (independent eigenproblem cross-check of a solve), simulate
// (synthetic tournaments). Exit codes: 0 ok, 2 parse/usage error,
// 3 degenerate refusal, 4 non-convergence, 5 verification FAIL.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratings/degeneracy.hpp"
#include "ratings/display.hpp"
#include "ratings/io.hpp"
#include "ratings/model.hpp"
#include "ratings/oracle.hpp"
#include "ratings/priors.hpp"
#include "ratings/simulator.hpp"
#include "ratings/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitVerifyFail = 5;

struct SolveFlags {
    ratings::SolverConfig config;
    std::string variant = "iter1";
    std::string priors_file;
    std::string prior_scale = "internal";
    bool override_degenerate = false;
};

void add_solver_flags(CLI::App& cmd, SolveFlags& f, bool with_priors) {
    cmd.add_option("--sigma", f.config.sigma, "Damping weight (drawn self-games)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--gamma", f.config.gamma, "Dummy-player weight; regularizes degenerate data")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--epsilon", f.config.epsilon, "Convergence threshold on the max relative change")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--max-iters", f.config.max_iters, "Iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--variant", f.variant, "Update rule")
        ->check(CLI::IsMember({"iter1", "iter2"}))
        ->capture_default_str();
    cmd.add_option("--threads", f.config.threads, "Worker threads; output is identical for any count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--override-degenerate", f.override_degenerate,
                 "Iterate on degenerate data anyway (ratings may diverge)");
    if (with_priors) {
        cmd.add_option("--priors", f.priors_file, "Prior ratings CSV: player,rating,weight");
        cmd.add_option("--prior-discount", f.config.prior_discount,
                       "Multiplier applied to every prior weight")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd.add_option("--prior-scale", f.prior_scale,
                       "Scale of the ratings in the priors file")
            ->check(CLI::IsMember({"internal", "display"}))
            ->capture_default_str();
    }
}

ratings::SolverConfig finish_config(SolveFlags& f) {
    f.config.variant = f.variant == "iter2" ? ratings::Variant::Iter2 : ratings::Variant::Iter1;
    f.config.allow_degenerate = f.override_degenerate;
    return f.config;
}

std::optional<ratings::PriorTable> load_priors(const SolveFlags& f, const ratings::ScoreMatrix& s,
                                               const ratings::DisplayScale& scale) {
    if (f.priors_file.empty()) return std::nullopt;
    auto list = ratings::read_priors_file(f.priors_file);
    if (f.prior_scale == "display")
        for (auto& p : list) p.r_hat = ratings::display_to_internal(p.r_hat, scale);
    auto table = ratings::merge_priors(s, list, f.config.prior_discount);
    for (const auto& name : table.unknown)
        std::cerr << "warning: prior for unknown player '" << name << "' ignored\n";
    return table;
}

std::string format_double(double v, const char* fmt = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

int refuse_degenerate(const ratings::DegenerateInput& e) {
    std::cerr << "error: " << e.what();
    return kExitDegenerate;
}

int cmd_rate(const std::string& games_file, SolveFlags& flags, const ratings::DisplayScale& scale) {
    const auto games = ratings::read_games_file(games_file);
    const auto s = ratings::aggregate(games);
    const auto config = finish_config(flags);
    const auto priors = load_priors(flags, s, scale);

    ratings::SolveResult result;
    try {
        result = ratings::solve(s, config, priors ? &*priors : nullptr);
    } catch (const ratings::DegenerateInput& e) {
        return refuse_degenerate(e);
    }

    std::vector<int> order(static_cast<std::size_t>(s.n()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return result.r[static_cast<std::size_t>(a)] > result.r[static_cast<std::size_t>(b)];
    });

    std::cout << "player\tgames\tscore\trating_internal\trating_display\n";
    for (int i : order) {
        const auto ii = static_cast<std::size_t>(i);
        std::cout << s.player(i) << '\t' << format_double(s.games_of(i), "%.10g") << '\t'
                  << format_double(s.points_for(i), "%.10g") << '\t'
                  << format_double(result.r[ii], "%.6f") << '\t'
                  << ratings::display_rating(result.r[ii], scale) << '\n';
    }

    double max_residual = 0.0;
    for (double r : result.residuals) max_residual = std::max(max_residual, std::abs(r));
    std::cout << "# players: " << s.n() << "\n# games: " << s.games() << '\n';
    std::cout << "# sigma: " << format_double(config.sigma) << '\n';
    std::cout << "# gamma: " << format_double(config.gamma) << '\n';
    std::cout << "# epsilon: " << format_double(config.epsilon) << '\n';
    std::cout << "# variant: " << flags.variant << '\n';
    std::cout << "# threads: " << config.threads << '\n';
    std::cout << "# scale: alpha=" << format_double(scale.alpha, "%.10g")
              << " beta=" << format_double(scale.beta, "%.10g") << '\n';
    std::cout << "# converged: " << (result.converged ? "true" : "false") << '\n';
    std::cout << "# iterations: " << result.iterations << '\n';
    std::cout << "# final_delta: " << format_double(result.final_delta) << '\n';
    std::cout << "# max_residual: " << format_double(max_residual) << '\n';
    if (!result.diverged_players.empty()) {
        std::cout << "# diverged:";
        for (int i : result.diverged_players) std::cout << ' ' << s.player(i);
        std::cout << '\n';
    }

    if (!result.converged) {
        std::cerr << "error: no convergence after " << result.iterations
                  << " iterations (final delta " << format_double(result.final_delta) << ")\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_check(const std::string& games_file, bool kv) {
    const auto games = ratings::read_games_file(games_file);
    const auto s = ratings::aggregate(games);
    const auto report = ratings::analyze(s);
    if (kv)
        ratings::report_kv(std::cout, report, s);
    else
        std::cout << ratings::report_text(report, s);
    return report.nondegenerate() ? kExitOk : kExitDegenerate;
}

int cmd_verify(const std::string& games_file, SolveFlags& flags, double tol) {
    const auto games = ratings::read_games_file(games_file);
    const auto s = ratings::aggregate(games);
    if (s.n() > ratings::oracle::kSizeCap) {
        std::cerr << "error: " << s.n() << " players exceeds the verification cap of "
                  << ratings::oracle::kSizeCap
                  << "; verification builds dense matrices and is meant for desk-scale inputs\n";
        return kExitParse;
    }
    const auto config = finish_config(flags);

    ratings::SolveResult result;
    try {
        result = ratings::solve(s, config);
    } catch (const ratings::DegenerateInput& e) {
        return refuse_degenerate(e);
    }

    const auto report = ratings::oracle::verify_solution(s, result.x, config.sigma, tol);
    std::cout << "defect_eigen=" << format_double(report.eigen_defect, "%.6e") << '\n';
    std::cout << "defect_stationarity=" << format_double(report.stationarity_defect, "%.6e") << '\n';
    std::cout << "defect_power_angle=" << format_double(report.power_angle, "%.6e") << '\n';
    std::cout << "power_converged=" << (report.power_converged ? "true" : "false") << '\n';
    std::cout << "tolerance=" << format_double(report.tol, "%.6e") << '\n';
    std::cout << "solver_converged=" << (result.converged ? "true" : "false") << '\n';
    std::cout << "solver_iterations=" << result.iterations << '\n';
    std::cout << "verdict=" << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? kExitOk : kExitVerifyFail;
}

struct SimulateFlags {
    int players = 0;
    long round_robin = 0;
    long random_games = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double spread = 2.0;
    double draw_prob = 0.0;
    std::string out_file;
    std::string truth_file;
};

int cmd_simulate(const SimulateFlags& f) {
    ratings::TournamentSpec spec;
    spec.players = f.players;
    spec.draw_prob = f.draw_prob;
    if (f.round_robin > 0) {
        spec.schedule = ratings::Schedule::RoundRobin;
        spec.rounds = f.round_robin;
    } else {
        spec.schedule = ratings::Schedule::RandomPairs;
        spec.games = f.random_games;
    }
    spec.seed = f.seed;
    if (!f.seed_given) {
        std::random_device entropy;
        spec.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    }

    spec.true_ratings.resize(static_cast<std::size_t>(f.players));
    for (int i = 0; i < f.players; ++i) {
        const double t = f.players > 1 ? static_cast<double>(i) / (f.players - 1) : 0.5;
        spec.true_ratings[static_cast<std::size_t>(i)] = f.spread * (0.5 - t);
    }

    const auto games = ratings::generate(spec);

    const std::vector<std::string> header = {
        "seed: " + std::to_string(spec.seed),
        "players: " + std::to_string(f.players),
        "games: " + std::to_string(games.size()),
    };
    if (f.out_file.empty()) {
        ratings::write_games(std::cout, games, header);
    } else {
        std::ofstream out(f.out_file);
        if (!out) throw ratings::ParseError("cannot open output file '" + f.out_file + "'");
        ratings::write_games(out, games, header);
    }

    if (!f.truth_file.empty()) {
        std::ofstream out(f.truth_file);
        if (!out) throw ratings::ParseError("cannot open truth file '" + f.truth_file + "'");
        std::vector<std::string> names;
        names.reserve(static_cast<std::size_t>(f.players));
        for (int i = 0; i < f.players; ++i) names.push_back(ratings::player_name(i));
        ratings::write_truth(out, names, spec.true_ratings);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pairwise-result rating engine"};
    app.require_subcommand(1);

    std::string games_file;
    SolveFlags solve_flags;
    ratings::DisplayScale scale;
    bool check_kv = false;
    double verify_tol = 1e-7;
    SimulateFlags sim;

    auto* rate = app.add_subcommand("rate", "Compute ratings from a games file");
    rate->add_option("games", games_file, "Games CSV: player_a,player_b,result")->required();
    add_solver_flags(*rate, solve_flags, true);
    rate->add_option("--scale-alpha", scale.alpha, "Display points per natural-log unit")
        ->capture_default_str();
    rate->add_option("--scale-beta", scale.beta, "Display offset")->capture_default_str();

    auto* check = app.add_subcommand("check", "Diagnose degeneracy of a games file");
    check->add_option("games", games_file, "Games CSV")->required();
    check->add_flag("--kv", check_kv, "Machine-readable key-value output");

    auto* verify = app.add_subcommand("verify", "Solve, then cross-check against the eigenproblem");
    verify->add_option("games", games_file, "Games CSV")->required();
    add_solver_flags(*verify, solve_flags, false);
    verify->add_option("--tol", verify_tol, "Defect tolerance for PASS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic tournament");
    simulate->add_option("--players", sim.players, "Number of players")
        ->required()
        ->check(CLI::Range(2, 1000000));
    auto* rr = simulate->add_option("--round-robin", sim.round_robin,
                                    "Rounds; every pair meets once per round")
                   ->check(CLI::PositiveNumber);
    auto* rg = simulate->add_option("--random-games", sim.random_games,
                                    "Total games over uniformly random distinct pairs")
                  ->check(CLI::PositiveNumber);
    rr->excludes(rg);
    rg->excludes(rr);
    auto* seed_opt = simulate->add_option("--seed", sim.seed, "RNG seed; omitted: drawn from entropy");
    simulate->add_option("--spread", sim.spread,
                         "True ratings evenly spaced over [-spread/2, spread/2], strongest first")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--draw-prob", sim.draw_prob, "Probability of a draw")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    simulate->add_option("--out", sim.out_file, "Games CSV path (default: standard output)");
    simulate->add_option("--truth", sim.truth_file, "Also write true ratings CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return kExitParse;
    }

    try {
        if (simulate->parsed()) {
            if (sim.round_robin == 0 && sim.random_games == 0) {
                std::cerr << "error: one of --round-robin or --random-games is required\n";
                return kExitParse;
            }
            sim.seed_given = seed_opt->count() > 0;
            return cmd_simulate(sim);
        }
        if (rate->parsed()) return cmd_rate(games_file, solve_flags, scale);
        if (check->parsed()) return cmd_check(games_file, check_kv);
        if (verify->parsed()) return cmd_verify(games_file, solve_flags, verify_tol);
    } catch (const ratings::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitParse;
}
