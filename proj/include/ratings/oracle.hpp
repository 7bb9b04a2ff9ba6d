#pragma once

#include <span>
#include <vector>

#include "ratings/model.hpp"

namespace ratings::oracle {

/// Dense storage only; the oracle exists to check the sparse solver at desk
/// scale, not to scale itself.
inline constexpr int kSizeCap = 500;

/// Cross-check matrices at a given strength vector: a_{i,j} =
/// s_{i,j} / (x_i + x_j) off the diagonal, a_{i,i} = sigma / (2 x_i);
/// d_i is the i-th column sum of A. The Markov transition matrix is kept
/// implicit as M^T = A D^{-1}.
struct WeightedMatrices {
    int n = 0;
    std::vector<double> a;  // row-major n*n
    std::vector<double> d;

    double at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    }
    /// Row sum of M; 1 by construction.
    double m_row_sum(int i) const;
};

/// Requires n <= kSizeCap, x > 0, and every column sum d_i > 0.
WeightedMatrices build(const ScoreMatrix& s, std::span<const double> x, double sigma);

struct PowerResult {
    std::vector<double> y;  // l1-normalized, nonnegative
    long iterations = 0;
    bool converged = false;
    double residual = 0.0;  // ||M^T y - y||_inf at the returned y
};

/// Power iteration for the stationary distribution of M: repeated
/// application of A D^{-1} from the uniform vector, l1-normalized each
/// step. Non-convergence (periodic or reducible chain) is reported, not
/// thrown.
PowerResult power_method(const WeightedMatrices& w, double tol, long max_iters);

struct VerifyReport {
    double eigen_defect = 0.0;         // (a) ||D^{-1} A x - x||_inf / ||x||_inf
    double stationarity_defect = 0.0;  // (b) ||M^T y - y||_inf at y = Dx / ||Dx||_1
    double power_angle = 0.0;          // (c) angle(power stationary, Dx), radians
    bool power_converged = false;
    double tol = 0.0;
    bool pass = false;  // all three defects below tol and the power run converged
};

/// Independent confirmation that x solves the rating equations: the
/// eigenvector residual, the stationarity of Dx, and agreement with a
/// from-scratch power-method run.
VerifyReport verify_solution(const ScoreMatrix& s, std::span<const double> x,
                             double sigma, double tol = 1e-7);

}  // namespace ratings::oracle
