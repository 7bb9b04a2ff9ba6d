#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "ratings/kernels.hpp"
#include "ratings/model.hpp"
#include "ratings/priors.hpp"
#include "ratings/solver.hpp"
#include "test_util.hpp"

using ratings::ScoreMatrix;
using ratings::SolverConfig;
using ratings::Variant;
using E = ScoreMatrix::Entry;

namespace {

ScoreMatrix two_player(double a, double b) {
    std::vector<E> entries;
    if (a > 0) entries.push_back({0, 1, a});
    if (b > 0) entries.push_back({1, 0, b});
    return ScoreMatrix::from_entries({"A", "B"}, entries,
                                     static_cast<std::int64_t>(a + b));
}

ratings::PriorTable no_priors(int n) {
    ratings::PriorTable t;
    t.x_hat.assign(static_cast<std::size_t>(n), 1.0);
    t.w_hat.assign(static_cast<std::size_t>(n), 0.0);
    return t;
}

}  // namespace

TEST_CASE("one sweep of the main update on the two-player instance") {
    const auto s = two_player(2, 1);
    const std::vector<double> x = {1, 1};

    SUBCASE("undamped") {
        const auto out = ratings::step_iter1(s, x, 0.0, 0.0);
        CHECK(out[0] == 2.0);
        CHECK(out[1] == 0.5);
    }
    SUBCASE("damped") {
        const auto out = ratings::step_iter1(s, x, 0.5, 0.0);
        CHECK(out[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(0.6).epsilon(1e-15));
    }
}

TEST_CASE("one sweep of the variant update") {
    const auto s = two_player(2, 1);
    const std::vector<double> x = {1, 1};
    const auto out = ratings::step_iter2(s, x, 0.0, 0.0);
    CHECK(out[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("an all-draw round robin is a fixed point of the variant update") {
    std::vector<E> entries;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) entries.push_back({i, j, 0.5});
    const auto s = ScoreMatrix::from_entries({"A", "B", "C", "D"}, entries, 6);
    const std::vector<double> x = {1, 1, 1, 1};
    for (double sigma : {0.0, 0.3, 0.7}) {
        const auto out = ratings::step_iter2(s, x, sigma, 0.0);
        for (double v : out) CHECK(v == 1.0);
    }
}

TEST_CASE("a consistent solution is a fixed point of both updates") {
    const auto s = two_player(2, 1);
    const std::vector<double> x = {2, 1};
    const auto out1 = ratings::step_iter1(s, x, 0.0, 0.0);
    const auto out2 = ratings::step_iter2(s, x, 0.0, 0.0);
    for (int i = 0; i < 2; ++i) {
        CHECK(out1[static_cast<std::size_t>(i)] ==
              doctest::Approx(x[static_cast<std::size_t>(i)]).epsilon(1e-15));
        CHECK(out2[static_cast<std::size_t>(i)] ==
              doctest::Approx(x[static_cast<std::size_t>(i)]).epsilon(1e-15));
    }
}

TEST_CASE("a prior matching the fixed point preserves it") {
    const auto s = two_player(2, 1);
    ratings::PriorTable priors = no_priors(2);
    priors.x_hat = {2.0, 1.0};
    priors.w_hat = {7.0, 3.0};
    const std::vector<double> x = {2, 1};
    const auto out = ratings::step_iter1(s, x, 0.0, 0.0, &priors);
    CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the undamped update is scale-equivariant") {
    std::mt19937_64 rng(417);
    const auto inst = testutil::random_nondegenerate(rng, 8, 20);
    const int n = inst.s.n();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = testutil::uniform(rng, 0.2, 5.0);

    const double kappa = 3.7;
    std::vector<double> kx = x;
    for (double& v : kx) v *= kappa;

    const auto a = ratings::step_iter1(inst.s, x, 0.0, 0.0);
    const auto b = ratings::step_iter1(inst.s, kx, 0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b[i] == doctest::Approx(kappa * a[i]).epsilon(1e-12));
}

TEST_CASE("updates preserve positivity") {
    std::mt19937_64 rng(55);
    const auto inst = testutil::random_nondegenerate(rng, 8, 30);
    std::vector<double> x(static_cast<std::size_t>(inst.s.n()));
    for (double& v : x) v = testutil::uniform(rng, 1e-3, 1e3);
    for (const auto& out : {ratings::step_iter1(inst.s, x, 0.3, 0.0),
                            ratings::step_iter2(inst.s, x, 0.3, 0.0),
                            ratings::step_iter1(inst.s, x, 0.0, 0.0)}) {
        for (double v : out) {
            CHECK(v > 0.0);
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("update sweeps validate their inputs") {
    const auto s = two_player(2, 1);
    const std::vector<double> short_x = {1.0};
    const std::vector<double> negative = {1.0, -1.0};
    const std::vector<double> zero = {1.0, 0.0};
    const std::vector<double> ok = {1.0, 1.0};
    CHECK_THROWS_AS((void)ratings::step_iter1(s, short_x, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ratings::step_iter1(s, negative, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ratings::step_iter1(s, zero, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ratings::step_iter1(s, ok, -0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ratings::step_iter1(s, ok, 0.3, -1.0), std::invalid_argument);
}

TEST_CASE("a player nothing anchors is reported by name") {
    // B conceded a point but A conceded none; with no damping A's update
    // divides by zero.
    const auto s = two_player(1, 0);
    const std::vector<double> ones = {1.0, 1.0};
    try {
        (void)ratings::step_iter1(s, ones, 0.0, 0.0);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("'A'") != std::string::npos);
    }
    // the variant update divides by games played, so only a player with no
    // games at all has a zero denominator
    const std::vector<E> pair = {{0, 1, 1}, {1, 0, 1}};
    const auto with_idle = ScoreMatrix::from_entries({"A", "B", "C"}, pair, 2);
    const std::vector<double> ones3 = {1.0, 1.0, 1.0};
    CHECK(ratings::step_iter2(s, ones, 0.0, 0.0)[0] == 2.0);
    try {
        (void)ratings::step_iter2(with_idle, ones3, 0.0, 0.0);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("'C'") != std::string::npos);
    }
    // parallel path reports the same player
    std::vector<double> out(2);
    CHECK_THROWS_AS(
        ratings::step_iter1_parallel(s, std::vector<double>{1, 1}, 0.0, 0.0, nullptr, out, 4),
        std::runtime_error);
}

TEST_CASE("parallel sweeps are bitwise identical to the serial reference") {
    std::mt19937_64 rng(2024);
    const auto inst = testutil::random_nondegenerate(rng, 30, 60);
    const int n = inst.s.n();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = testutil::uniform(rng, 0.1, 10.0);

    ratings::PriorTable priors = no_priors(n);
    priors.x_hat[3] = 1.7;
    priors.w_hat[3] = 4.0;

    for (int threads : {2, 3, 8}) {
        const auto s1 = ratings::step_iter1(inst.s, x, 0.3, 0.2, &priors, 1);
        const auto p1 = ratings::step_iter1(inst.s, x, 0.3, 0.2, &priors, threads);
        CHECK(s1 == p1);
        const auto s2 = ratings::step_iter2(inst.s, x, 0.3, 0.2, &priors, 1);
        const auto p2 = ratings::step_iter2(inst.s, x, 0.3, 0.2, &priors, threads);
        CHECK(s2 == p2);
    }
}

TEST_CASE("full solves are bitwise identical across thread counts") {
    std::mt19937_64 rng(31337);
    const auto inst = testutil::random_nondegenerate(rng, 20, 40);
    SolverConfig config;
    config.threads = 1;
    const auto serial = ratings::solve(inst.s, config);
    config.threads = 4;
    const auto parallel = ratings::solve(inst.s, config);
    CHECK(serial.x == parallel.x);
    CHECK(serial.iterations == parallel.iterations);
    CHECK(serial.final_delta == parallel.final_delta);
}

TEST_CASE("normalize fixes the geometric mean at one") {
    const auto a = ratings::normalize(std::vector<double>{2.0, 0.5});
    CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-15));

    const double e = std::numbers::e;
    const auto b = ratings::normalize(std::vector<double>{e, e});
    CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-15));

    const auto c = ratings::normalize(std::vector<double>{4.0, 1.0});
    CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(ratings::normalize(std::vector<double>{1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("convergence delta is the max relative change") {
    CHECK(ratings::convergence_delta(std::vector<double>{1, 2, 3},
                                     std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(ratings::convergence_delta(std::vector<double>{1, 1},
                                     std::vector<double>{2, 0.5}) == 1.0);
    CHECK(ratings::convergence_delta(std::vector<double>{1, 1}, std::vector<double>{1.01, 1}) ==
          doctest::Approx(0.01 / 1.01).epsilon(1e-15));
    CHECK_THROWS_AS(ratings::convergence_delta(std::vector<double>{1},
                                               std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("two-player solve recovers the score-ratio rating gap") {
    const auto s = two_player(2, 1);
    SolverConfig config;  // sigma 0.3, epsilon 1e-10
    const auto result = ratings::solve(s, config);
    CHECK(result.converged);
    CHECK(result.r[0] - result.r[1] == doctest::Approx(std::numbers::ln2).epsilon(1e-8));
    CHECK(result.r[0] + result.r[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(!result.scale_anchored);
    CHECK(result.x[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("an all-draw round robin rates everyone equally") {
    std::vector<E> entries;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) entries.push_back({i, j, 0.5});
    const auto s = ScoreMatrix::from_entries({"A", "B", "C", "D"}, entries, 6);
    const auto result = ratings::solve(s, SolverConfig{});
    CHECK(result.converged);
    CHECK(result.iterations == 1);
    for (double r : result.r) CHECK(r == 0.0);
}

TEST_CASE("undamped two-player iteration oscillates forever") {
    const auto s = two_player(2, 1);
    SolverConfig config;
    config.sigma = 0.0;
    config.max_iters = 500;
    const auto result = ratings::solve(s, config);
    CHECK(!result.converged);
    CHECK(result.iterations == 500);
    CHECK(result.final_delta == doctest::Approx(1.0));
}

TEST_CASE("consistency residuals vanish exactly at the solution") {
    const auto s = two_player(2, 1);
    const auto zero = ratings::consistency_residuals(s, std::vector<double>{2, 1});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    const auto off = ratings::consistency_residuals(s, std::vector<double>{1, 1});
    CHECK(off[0] == -0.5);
    CHECK(off[1] == 0.5);
}

TEST_CASE("residuals sum to zero without dummy or prior terms") {
    std::mt19937_64 rng(8080);
    const auto inst = testutil::random_nondegenerate(rng, 10, 40);
    std::vector<double> x(static_cast<std::size_t>(inst.s.n()));
    for (double& v : x) v = testutil::uniform(rng, 0.5, 2.0);
    const auto res = ratings::consistency_residuals(inst.s, x);
    double sum = 0.0;
    for (double r : res) sum += r;
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degenerate input is refused with the analysis attached") {
    const auto s = two_player(1, 0);
    try {
        (void)ratings::solve(s, SolverConfig{});
        FAIL("expected DegenerateInput");
    } catch (const ratings::DegenerateInput& e) {
        CHECK(e.report().verdict == ratings::Verdict::Degenerate);
        CHECK(e.report().zero_loss_players == std::vector<int>{0});
        CHECK(std::string(e.what()).find("degenerate") != std::string::npos);
    }
}

TEST_CASE("a dummy opponent makes one-sided data solvable") {
    const auto s = two_player(1, 0);
    SolverConfig config;
    config.gamma = 1.0;
    const auto result = ratings::solve(s, config);
    CHECK(result.converged);
    CHECK(result.scale_anchored);
    CHECK(result.r[0] > result.r[1]);
    for (double v : result.x) CHECK(std::isfinite(v));

    double max_res = 0.0;
    for (double r : result.residuals) max_res = std::max(max_res, std::abs(r));
    CHECK(max_res < 1e-8);
}

TEST_CASE("override runs degenerate data and flags runaway players") {
    const auto s = two_player(1, 0);
    SolverConfig config;
    config.allow_degenerate = true;

    SUBCASE("slow drift hits the iteration cap") {
        config.max_iters = 2000;
        const auto result = ratings::solve(s, config);
        CHECK(!result.converged);
        CHECK(result.iterations == 2000);
        CHECK(result.diverged_players.empty());
    }
    SUBCASE("an extreme start trips the divergence bounds") {
        ratings::SolveHooks hooks;
        const std::vector<double> start = {1e16, 1e-16};
        hooks.start = &start;
        const auto result = ratings::solve(s, config, nullptr, &hooks);
        CHECK(!result.converged);
        CHECK(!result.diverged_players.empty());
        CHECK(result.iterations < 10);
    }
}

TEST_CASE("solves agree from any positive starting point") {
    std::mt19937_64 rng(606);
    const auto inst = testutil::random_nondegenerate(rng, 10, 30);
    SolverConfig config;
    const auto base = ratings::solve(inst.s, config);
    REQUIRE(base.converged);

    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> start(static_cast<std::size_t>(inst.s.n()));
        for (double& v : start) v = testutil::uniform(rng, 0.05, 20.0);
        ratings::SolveHooks hooks;
        hooks.start = &start;
        const auto result = ratings::solve(inst.s, config, nullptr, &hooks);
        REQUIRE(result.converged);
        CHECK(testutil::max_rel_diff(result.x, base.x) < 100 * config.epsilon);
    }
}

TEST_CASE("both update rules find the same ratings") {
    std::mt19937_64 rng(919);
    const auto inst = testutil::random_nondegenerate(rng, 8, 25);
    SolverConfig config;
    const auto a = ratings::solve(inst.s, config);
    config.variant = Variant::Iter2;
    const auto b = ratings::solve(inst.s, config);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(testutil::max_rel_diff(a.x, b.x) < 1e-8);

    double max_res = 0.0;
    for (double r : a.residuals) max_res = std::max(max_res, std::abs(r));
    CHECK(max_res < 1e-8);

    // converged output of one rule is (nearly) fixed under the other
    const auto cross = ratings::step_iter2(inst.s, a.x, config.sigma, 0.0);
    CHECK(testutil::max_rel_diff(cross, a.x) < 1e-8);
}

TEST_CASE("zero-weight priors reproduce the unanchored solve bitwise") {
    std::mt19937_64 rng(333);
    const auto inst = testutil::random_nondegenerate(rng, 8, 20);
    SolverConfig config;
    const auto bare = ratings::solve(inst.s, config);
    const auto table = no_priors(inst.s.n());
    const auto with_table = ratings::solve(inst.s, config, &table);
    CHECK(bare.x == with_table.x);
    CHECK(bare.iterations == with_table.iterations);
    CHECK(!with_table.scale_anchored);
}

TEST_CASE("a heavy prior pins a player's rating") {
    const auto s = ScoreMatrix::from_entries(
        {"A", "B", "C"},
        std::vector<E>{{0, 1, 2}, {0, 2, 1}, {1, 0, 1}, {1, 2, 2}, {2, 0, 1}, {2, 1, 2}}, 9);
    ratings::PriorTable priors = no_priors(3);
    priors.x_hat[0] = std::exp(0.4);
    priors.w_hat[0] = 1e6;

    SolverConfig config;
    const auto result = ratings::solve(s, config, &priors);
    CHECK(result.converged);
    CHECK(result.scale_anchored);
    CHECK(std::abs(result.r[0] - 0.4) < 1e-3);
}

TEST_CASE("moderate priors still zero the extended residuals") {
    const auto s = ScoreMatrix::from_entries(
        {"A", "B", "C"},
        std::vector<E>{{0, 1, 2}, {0, 2, 1}, {1, 0, 1}, {1, 2, 2}, {2, 0, 1}, {2, 1, 2}}, 9);
    ratings::PriorTable priors = no_priors(3);
    priors.x_hat[0] = std::exp(0.4);
    priors.w_hat[0] = 5.0;

    const auto result = ratings::solve(s, SolverConfig{}, &priors);
    REQUIRE(result.converged);
    double max_res = 0.0;
    for (double r : result.residuals) max_res = std::max(max_res, std::abs(r));
    CHECK(max_res < 1e-8);
}

TEST_CASE("the dummy weight trades evidence against the anchor") {
    const auto s = two_player(1, 0);
    double prev = 0.0;
    bool first = true;
    for (double gamma : {1.0, 0.1, 0.01}) {
        SolverConfig config;
        config.gamma = gamma;
        const auto result = ratings::solve(s, config);
        REQUIRE(result.converged);
        const double diff = result.r[0] - result.r[1];
        if (!first) CHECK(diff > prev);
        prev = diff;
        first = false;
    }
}

TEST_CASE("iteration stops exactly when the delta first dips under epsilon") {
    std::mt19937_64 rng(11);
    const auto inst = testutil::random_nondegenerate(rng, 10, 30);
    SolverConfig config;
    config.epsilon = 1e-8;

    std::vector<double> deltas;
    ratings::SolveHooks hooks;
    hooks.on_iteration = [&](long k, std::span<const double>, double delta) {
        CHECK(k == static_cast<long>(deltas.size()) + 1);
        deltas.push_back(delta);
    };
    const auto result = ratings::solve(inst.s, config, nullptr, &hooks);
    REQUIRE(result.converged);
    REQUIRE(static_cast<long>(deltas.size()) == result.iterations);
    CHECK(deltas.back() < config.epsilon);
    CHECK(deltas.back() == result.final_delta);
    for (std::size_t k = 0; k + 1 < deltas.size(); ++k) CHECK(deltas[k] >= config.epsilon);
}

TEST_CASE("solve validates its configuration") {
    const auto s = two_player(2, 1);
    SolverConfig config;
    config.epsilon = 0.0;
    CHECK_THROWS_AS((void)ratings::solve(s, config), std::invalid_argument);
    config = SolverConfig{};
    config.max_iters = 0;
    CHECK_THROWS_AS((void)ratings::solve(s, config), std::invalid_argument);
    config = SolverConfig{};
    config.sigma = -0.5;
    CHECK_THROWS_AS((void)ratings::solve(s, config), std::invalid_argument);
    config = SolverConfig{};
    config.threads = 0;
    CHECK_THROWS_AS((void)ratings::solve(s, config), std::invalid_argument);

    ratings::PriorTable small = no_priors(1);
    CHECK_THROWS_AS((void)ratings::solve(s, SolverConfig{}, &small), std::invalid_argument);

    ratings::SolveHooks hooks;
    const std::vector<double> bad_start = {1.0, -1.0};
    hooks.start = &bad_start;
    CHECK_THROWS_AS((void)ratings::solve(s, SolverConfig{}, nullptr, &hooks),
                    std::invalid_argument);
}

TEST_CASE("merge_priors aligns, discounts, and reports unknowns") {
    const auto s = two_player(2, 1);
    const std::vector<ratings::PriorRating> priors = {{"A", 0.0, 10.0}, {"Z", 1.0, 4.0}};
    const auto table = ratings::merge_priors(s, priors, 0.5);
    CHECK(table.x_hat[0] == 1.0);
    CHECK(table.w_hat[0] == 5.0);
    CHECK(table.w_hat[1] == 0.0);
    CHECK(table.unknown == std::vector<std::string>{"Z"});
    CHECK(table.any());

    CHECK_THROWS_AS((void)ratings::merge_priors(s, priors, 0.5, ratings::UnknownPrior::Error),
                    std::invalid_argument);
    const std::vector<ratings::PriorRating> dup = {{"A", 0.0, 1.0}, {"A", 0.5, 1.0}};
    CHECK_THROWS_AS((void)ratings::merge_priors(s, dup, 1.0), std::invalid_argument);
    CHECK(!ratings::merge_priors(s, {}, 1.0).any());
}
