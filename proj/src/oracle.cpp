#include "ratings/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ratings::oracle {

namespace {

void apply_markov(const WeightedMatrices& w, std::span<const double> v, std::span<double> out) {
    // out = A D^{-1} v, the stationary-equation map applied to a column
    // distribution.
    const int n = w.n;
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
            sum += w.at(i, j) * v[static_cast<std::size_t>(j)] / w.d[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = sum;
    }
}

double linf_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void l1_normalize(std::span<double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    if (!(sum > 0.0)) throw std::runtime_error("power method: iterate collapsed to zero");
    for (double& x : v) x /= sum;
}

}  // namespace

double WeightedMatrices::m_row_sum(int i) const {
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
        sum += a[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    return sum / d[static_cast<std::size_t>(i)];
}

WeightedMatrices build(const ScoreMatrix& s, std::span<const double> x, double sigma) {
    const int n = s.n();
    if (n > kSizeCap)
        throw std::invalid_argument("oracle: " + std::to_string(n) + " players exceeds the dense cap of " +
                                    std::to_string(kSizeCap));
    if (x.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("oracle: vector size does not match matrix");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("oracle: sigma must be finite and >= 0");
    for (double v : x)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("oracle: x entries must be positive and finite");

    WeightedMatrices w;
    w.n = n;
    w.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    w.d.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto row = s.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const int j = row.cols[k];
            w.a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                row.vals[k] / (x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(j)]);
        }
        if (sigma > 0.0)
            w.a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
                sigma / (2.0 * x[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += w.a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        if (!(sum > 0.0))
            throw std::invalid_argument("oracle: column " + std::to_string(j) + " (player '" + s.player(j) +
                                        "') sums to zero; no conceded points and no damping");
        w.d[static_cast<std::size_t>(j)] = sum;
    }
    return w;
}

PowerResult power_method(const WeightedMatrices& w, double tol, long max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("power method: tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("power method: max_iters must be >= 1");
    const auto n = static_cast<std::size_t>(w.n);

    PowerResult result;
    result.y.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    std::vector<double> next(n);
    for (long k = 1; k <= max_iters; ++k) {
        apply_markov(w, result.y, next);
        l1_normalize(next);
        const double diff = linf_diff(result.y, next);
        result.y.swap(next);
        result.iterations = k;
        if (diff < tol) {
            result.converged = true;
            break;
        }
    }
    apply_markov(w, result.y, next);
    result.residual = linf_diff(result.y, next);
    return result;
}

VerifyReport verify_solution(const ScoreMatrix& s, std::span<const double> x, double sigma,
                             double tol) {
    const WeightedMatrices w = build(s, x, sigma);
    const auto n = static_cast<std::size_t>(w.n);

    VerifyReport report;
    report.tol = tol;

    // (a) x should be the principal eigenvector of D^{-1} A.
    std::vector<double> ax(n, 0.0);
    double x_inf = 0.0;
    double defect_a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += w.a[i * n + j] * x[j];
        ax[i] = sum / w.d[i];
        x_inf = std::max(x_inf, std::abs(x[i]));
        defect_a = std::max(defect_a, std::abs(ax[i] - x[i]));
    }
    report.eigen_defect = x_inf > 0.0 ? defect_a / x_inf : 0.0;

    // (b) y = Dx, scaled to a distribution, should be stationary for M.
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = w.d[i] * x[i];
    l1_normalize(y);
    std::vector<double> my(n);
    apply_markov(w, y, my);
    report.stationarity_defect = linf_diff(my, y);

    // (c) a from-scratch power run should land on the same ray as Dx.
    const PowerResult power = power_method(w, 1e-12, 50000);
    report.power_converged = power.converged;
    double nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        nu += power.y[i] * power.y[i];
        nv += y[i] * y[i];
    }
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    double dm = 0.0, dp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = power.y[i] / nu;
        const double v = y[i] / nv;
        dm += (u - v) * (u - v);
        dp += (u + v) * (u + v);
    }
    report.power_angle = 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));

    report.pass = report.power_converged && report.eigen_defect < tol &&
                  report.stationarity_defect < tol && report.power_angle < tol;
    return report;
}

}  // namespace ratings::oracle
