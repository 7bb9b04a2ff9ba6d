#include "ratings/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ratings {

namespace {

void check_inputs(const ScoreMatrix& s, std::span<const double> x, double sigma,
                  double gamma, const PriorTable* priors, std::span<double> out) {
    const auto n = static_cast<std::size_t>(s.n());
    if (x.size() != n || out.size() != n)
        throw std::invalid_argument("step: vector size does not match matrix");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("step: sigma must be finite and >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("step: gamma must be finite and >= 0");
    if (priors && (priors->x_hat.size() != n || priors->w_hat.size() != n))
        throw std::invalid_argument("step: prior table size does not match matrix");
    for (std::size_t i = 0; i < n; ++i)
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw std::invalid_argument("step: x[" + std::to_string(i) +
                                        "] is not a positive finite number");
}

// numerator / denominator of the update for row i; denominator == 0 flags
// a player the equations cannot place (nothing conceded, no damping).
struct Ratio {
    double num;
    double den;
};

inline Ratio row_iter1(const ScoreMatrix& s, std::span<const double> x, double sigma,
                       double gamma, const PriorTable* priors, int i) {
    const double xi = x[static_cast<std::size_t>(i)];
    double num = 0.0;
    const auto won = s.row(i);
    for (std::size_t k = 0; k < won.size(); ++k) {
        const double xj = x[static_cast<std::size_t>(won.cols[k])];
        num += won.vals[k] * xj / (xi + xj);
    }
    double den = 0.0;
    const auto lost = s.row_transposed(i);
    for (std::size_t k = 0; k < lost.size(); ++k) {
        const double xj = x[static_cast<std::size_t>(lost.cols[k])];
        den += lost.vals[k] / (xi + xj);
    }
    if (sigma > 0.0) {
        num += sigma / 2.0;
        den += sigma / (2.0 * xi);
    }
    if (gamma > 0.0) {
        const double t = gamma / (2.0 * (xi + 1.0));
        num += t;
        den += t;
    }
    if (priors && priors->w_hat[static_cast<std::size_t>(i)] > 0.0) {
        const double w = priors->w_hat[static_cast<std::size_t>(i)];
        const double xh = priors->x_hat[static_cast<std::size_t>(i)];
        num += w * xh / (2.0 * (xi + xh));
        den += w / (2.0 * (xi + xh));
    }
    return {num, den};
}

inline Ratio row_iter2(const ScoreMatrix& s, std::span<const double> x, double sigma,
                       double gamma, const PriorTable* priors, int i) {
    const double xi = x[static_cast<std::size_t>(i)];
    double num = 0.0;
    double den = 0.0;
    // Merge the won and conceded rows (both ascending by column) so each
    // opponent's games are weighted once, in a fixed order.
    const auto won = s.row(i);
    const auto lost = s.row_transposed(i);
    std::size_t a = 0, b = 0;
    while (a < won.size() || b < lost.size()) {
        int j;
        double g = 0.0;
        if (b == lost.size() || (a < won.size() && won.cols[a] < lost.cols[b])) {
            j = won.cols[a];
            g = won.vals[a];
            num += won.vals[a];
            ++a;
        } else if (a == won.size() || lost.cols[b] < won.cols[a]) {
            j = lost.cols[b];
            g = lost.vals[b];
            ++b;
        } else {
            j = won.cols[a];
            g = won.vals[a] + lost.vals[b];
            num += won.vals[a];
            ++a;
            ++b;
        }
        den += g / (xi + x[static_cast<std::size_t>(j)]);
    }
    if (sigma > 0.0) {
        num += sigma;
        den += sigma / xi;
    }
    if (gamma > 0.0) {
        num += gamma / 2.0;
        den += gamma / (xi + 1.0);
    }
    if (priors && priors->w_hat[static_cast<std::size_t>(i)] > 0.0) {
        const double w = priors->w_hat[static_cast<std::size_t>(i)];
        const double xh = priors->x_hat[static_cast<std::size_t>(i)];
        num += w / 2.0;
        den += w / (xi + xh);
    }
    return {num, den};
}

[[noreturn]] void throw_pinned(const ScoreMatrix& s, int i) {
    throw std::runtime_error("step: update for player '" + s.player(i) +
                             "' has zero denominator (no conceded points and no damping); "
                             "the data is degenerate");
}

template <Ratio (*Row)(const ScoreMatrix&, std::span<const double>, double, double,
                       const PriorTable*, int)>
void run_serial(const ScoreMatrix& s, std::span<const double> x, double sigma, double gamma,
                const PriorTable* priors, std::span<double> out) {
    check_inputs(s, x, sigma, gamma, priors, out);
    for (int i = 0; i < s.n(); ++i) {
        const Ratio r = Row(s, x, sigma, gamma, priors, i);
        if (r.den == 0.0) throw_pinned(s, i);
        out[static_cast<std::size_t>(i)] = r.num / r.den;
    }
}

template <Ratio (*Row)(const ScoreMatrix&, std::span<const double>, double, double,
                       const PriorTable*, int)>
void run_parallel(const ScoreMatrix& s, std::span<const double> x, double sigma, double gamma,
                  const PriorTable* priors, std::span<double> out, int threads) {
    check_inputs(s, x, sigma, gamma, priors, out);
    if (threads < 1) throw std::invalid_argument("step: threads must be >= 1");
    const int n = s.n();
    std::atomic<int> first_bad(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (int i = 0; i < n; ++i) {
        const Ratio r = Row(s, x, sigma, gamma, priors, i);
        if (r.den == 0.0) {
            int seen = first_bad.load(std::memory_order_relaxed);
            while (i < seen && !first_bad.compare_exchange_weak(seen, i)) {
            }
            out[static_cast<std::size_t>(i)] = 1.0;
        } else {
            out[static_cast<std::size_t>(i)] = r.num / r.den;
        }
    }
    if (first_bad.load() < n) throw_pinned(s, first_bad.load());
}

}  // namespace

void step_iter1_serial(const ScoreMatrix& s, std::span<const double> x, double sigma,
                       double gamma, const PriorTable* priors, std::span<double> out) {
    run_serial<row_iter1>(s, x, sigma, gamma, priors, out);
}

void step_iter1_parallel(const ScoreMatrix& s, std::span<const double> x, double sigma,
                         double gamma, const PriorTable* priors, std::span<double> out,
                         int threads) {
    run_parallel<row_iter1>(s, x, sigma, gamma, priors, out, threads);
}

void step_iter2_serial(const ScoreMatrix& s, std::span<const double> x, double sigma,
                       double gamma, const PriorTable* priors, std::span<double> out) {
    run_serial<row_iter2>(s, x, sigma, gamma, priors, out);
}

void step_iter2_parallel(const ScoreMatrix& s, std::span<const double> x, double sigma,
                         double gamma, const PriorTable* priors, std::span<double> out,
                         int threads) {
    run_parallel<row_iter2>(s, x, sigma, gamma, priors, out, threads);
}

std::vector<double> step_iter1(const ScoreMatrix& s, std::span<const double> x, double sigma,
                               double gamma, const PriorTable* priors, int threads) {
    std::vector<double> out(x.size());
    if (threads == 1)
        step_iter1_serial(s, x, sigma, gamma, priors, out);
    else
        step_iter1_parallel(s, x, sigma, gamma, priors, out, threads);
    return out;
}

std::vector<double> step_iter2(const ScoreMatrix& s, std::span<const double> x, double sigma,
                               double gamma, const PriorTable* priors, int threads) {
    std::vector<double> out(x.size());
    if (threads == 1)
        step_iter2_serial(s, x, sigma, gamma, priors, out);
    else
        step_iter2_parallel(s, x, sigma, gamma, priors, out, threads);
    return out;
}

}  // namespace ratings
