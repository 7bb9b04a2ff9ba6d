#include "ratings/solver.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ratings/kernels.hpp"

namespace ratings {

DegenerateInput::DegenerateInput(const std::string& what, DegeneracyReport report)
    : std::runtime_error(what), report_(std::move(report)) {}

std::vector<double> normalize(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    if (out.empty()) return out;
    double sum_log = 0.0;
    for (double v : out) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("normalize: entries must be positive and finite");
        sum_log += std::log(v);
    }
    const double scale = std::exp(-sum_log / static_cast<double>(out.size()));
    for (double& v : out) v *= scale;
    return out;
}

double convergence_delta(std::span<const double> prev, std::span<const double> next) {
    if (prev.size() != next.size())
        throw std::invalid_argument("convergence_delta: size mismatch");
    double delta = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = std::abs(next[i] - prev[i]) / next[i];
        if (d > delta) delta = d;
    }
    return delta;
}

std::vector<double> consistency_residuals(const ScoreMatrix& s, std::span<const double> x,
                                          double gamma, const PriorTable* priors) {
    const auto n = static_cast<std::size_t>(s.n());
    if (x.size() != n) throw std::invalid_argument("consistency_residuals: size mismatch");
    std::vector<double> res(n, 0.0);
    for (int i = 0; i < s.n(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const double xi = x[ii];
        double expected = 0.0;
        double actual = 0.0;
        const auto won = s.row(i);
        const auto lost = s.row_transposed(i);
        std::size_t a = 0, b = 0;
        while (a < won.size() || b < lost.size()) {
            int j;
            double g;
            if (b == lost.size() || (a < won.size() && won.cols[a] < lost.cols[b])) {
                j = won.cols[a];
                g = won.vals[a];
                actual += won.vals[a];
                ++a;
            } else if (a == won.size() || lost.cols[b] < won.cols[a]) {
                j = lost.cols[b];
                g = lost.vals[b];
                ++b;
            } else {
                j = won.cols[a];
                g = won.vals[a] + lost.vals[b];
                actual += won.vals[a];
                ++a;
                ++b;
            }
            expected += g * xi / (xi + x[static_cast<std::size_t>(j)]);
        }
        double r = expected - actual;
        if (gamma > 0.0) r += gamma * (xi / (xi + 1.0) - 0.5);
        if (priors && priors->w_hat[ii] > 0.0)
            r += priors->w_hat[ii] * (xi / (xi + priors->x_hat[ii]) - 0.5);
        res[ii] = r;
    }
    return res;
}

SolveResult solve(const ScoreMatrix& s, const SolverConfig& config, const PriorTable* priors,
                  const SolveHooks* hooks) {
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
        throw std::invalid_argument("solve: epsilon must be finite and > 0");
    if (config.max_iters < 1) throw std::invalid_argument("solve: max_iters must be >= 1");
    if (!(config.sigma >= 0.0) || !std::isfinite(config.sigma))
        throw std::invalid_argument("solve: sigma must be finite and >= 0");
    if (!(config.gamma >= 0.0) || !std::isfinite(config.gamma))
        throw std::invalid_argument("solve: gamma must be finite and >= 0");
    if (config.threads < 1) throw std::invalid_argument("solve: threads must be >= 1");

    const auto n = static_cast<std::size_t>(s.n());
    if (priors && (priors->x_hat.size() != n || priors->w_hat.size() != n))
        throw std::invalid_argument("solve: prior table size does not match matrix");

    if (config.gamma == 0.0 && !config.allow_degenerate) {
        DegeneracyReport report = analyze(s);
        if (!report.nondegenerate()) {
            std::string what = "degenerate input:\n" + report_text(report, s);
            throw DegenerateInput(what, std::move(report));
        }
    }

    const bool anchored = config.gamma > 0.0 || (priors && priors->any());

    std::vector<double> x;
    if (hooks && hooks->start) {
        if (hooks->start->size() != n) throw std::invalid_argument("solve: start size mismatch");
        for (double v : *hooks->start)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("solve: start entries must be positive and finite");
        x = *hooks->start;
    } else {
        x.assign(n, 1.0);
    }

    auto step = config.variant == Variant::Iter1 ? step_iter1 : step_iter2;

    SolveResult result;
    result.scale_anchored = anchored;
    std::vector<double> next;
    constexpr double kLow = 1e-15, kHigh = 1e15;

    for (long k = 1; k <= config.max_iters; ++k) {
        next = step(s, x, config.sigma, config.gamma, priors, config.threads);
        if (!anchored) next = normalize(next);
        const double delta = convergence_delta(x, next);
        x.swap(next);
        result.iterations = k;
        result.final_delta = delta;
        if (hooks && hooks->on_iteration) hooks->on_iteration(k, x, delta);
        // an iterate outside the safety bounds is divergence even when the
        // step-to-step delta is tiny (a runaway pseudo-fixed point)
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] < kLow || x[i] > kHigh) result.diverged_players.push_back(static_cast<int>(i));
        if (!result.diverged_players.empty()) break;
        if (delta < config.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.x = std::move(x);
    result.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.r[i] = std::log(result.x[i]);
    result.residuals = consistency_residuals(s, result.x, config.gamma, priors);
    return result;
}

}  // namespace ratings
