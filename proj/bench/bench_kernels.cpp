// Kernel benchmark: serial sweep vs the OpenMP sweep on random-pairs
// instances of growing size, with a bitwise equality check between the two
// (the parallel kernel must not reassociate anything). Build-only target;
// not part of the test suite.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratings/kernels.hpp"
#include "ratings/model.hpp"

namespace {

using ratings::ScoreMatrix;

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

ScoreMatrix random_pairs(std::mt19937_64& rng, long games, int players) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(players));
    for (int i = 0; i < players; ++i) names.push_back("P" + std::to_string(i + 1));
    std::vector<ScoreMatrix::Entry> entries;
    entries.reserve(static_cast<std::size_t>(2 * games));
    for (long g = 0; g < games; ++g) {
        const int i = static_cast<int>(below(rng, static_cast<std::uint64_t>(players)));
        int j = static_cast<int>(below(rng, static_cast<std::uint64_t>(players - 1)));
        if (j >= i) ++j;
        // a win, a loss, or a draw, so both row directions get filled
        const std::uint64_t kind = below(rng, 4);
        if (kind == 0) {
            entries.push_back({i, j, 0.5});
            entries.push_back({j, i, 0.5});
        } else if (kind & 1) {
            entries.push_back({i, j, 1.0});
        } else {
            entries.push_back({j, i, 1.0});
        }
    }
    return ScoreMatrix::from_entries(std::move(names), entries, games);
}

using StepFn = void (*)(const ScoreMatrix&, std::span<const double>, double, double,
                        const ratings::PriorTable*, std::span<double>);

double time_step(const ScoreMatrix& s, std::span<const double> x, std::span<double> out,
                 StepFn serial_fn, int threads, double min_seconds) {
    const auto run = [&] {
        if (threads == 1)
            serial_fn(s, x, 0.3, 0.0, nullptr, out);
        else if (serial_fn == &ratings::step_iter1_serial)
            ratings::step_iter1_parallel(s, x, 0.3, 0.0, nullptr, out, threads);
        else
            ratings::step_iter2_parallel(s, x, 0.3, 0.0, nullptr, out, threads);
    };
    run();  // warm up
    long reps = 0;
    const auto t0 = std::chrono::steady_clock::now();
    double elapsed = 0.0;
    while (elapsed < min_seconds || reps < 3) {
        run();
        ++reps;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return elapsed / static_cast<double>(reps);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<long> game_counts = {10000, 100000, 1000000};
    std::vector<int> thread_counts = {2, 4, 8};
    double min_seconds = 0.3;
    std::uint64_t seed = 1;

    CLI::App app{"Serial vs OpenMP sweep benchmark"};
    app.add_option("--games", game_counts, "Game counts to benchmark");
    app.add_option("--threads", thread_counts, "Thread counts for the parallel kernel");
    app.add_option("--min-seconds", min_seconds, "Minimum wall time per measurement")
        ->capture_default_str();
    app.add_option("--seed", seed, "Instance RNG seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    bool all_identical = true;
    for (int variant = 1; variant <= 2; ++variant) {
        const StepFn serial_fn =
            variant == 1 ? &ratings::step_iter1_serial : &ratings::step_iter2_serial;
        std::printf("sweep iter%d\n", variant);
        std::printf("%10s %9s %10s %12s", "games", "players", "nonzeros", "serial");
        for (int t : thread_counts) std::printf(" %9s %7s", ("omp-" + std::to_string(t)).c_str(), "speedup");
        std::printf(" %9s\n", "bitwise");

        for (long m : game_counts) {
            const int n = static_cast<int>(m / 10);
            std::mt19937_64 rng(seed);
            const auto s = random_pairs(rng, m, n);

            std::vector<double> x(static_cast<std::size_t>(n));
            for (double& v : x) v = 0.5 + 1.5 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
            std::vector<double> serial_out(x.size()), parallel_out(x.size());

            const double t_serial = time_step(s, x, serial_out, serial_fn, 1, min_seconds);
            std::printf("%10ld %9d %10zu %9.3f ms", m, n, s.nonzeros(), t_serial * 1e3);

            bool identical = true;
            for (int threads : thread_counts) {
                const double t_par = time_step(s, x, parallel_out, serial_fn, threads, min_seconds);
                identical = identical && parallel_out == serial_out;
                std::printf(" %6.3f ms %6.2fx", t_par * 1e3, t_serial / t_par);
            }
            std::printf(" %9s\n", identical ? "ok" : "MISMATCH");
            all_identical = all_identical && identical;
        }
        std::printf("\n");
    }

    if (!all_identical) {
        std::fprintf(stderr, "parallel output differs from the serial reference\n");
        return 1;
    }
    return 0;
}
