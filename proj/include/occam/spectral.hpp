#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "occam/errors.hpp"
#include "occam/types.hpp"

namespace occam {

// Adjacency spectral embedding. Under the model W = X X^T with
// X = sqrt(alpha) Theta Z B^{1/2}, so the top-K eigenspace of A estimates
// the column space of X. Eigenvalues are selected by algebraic value, not
// magnitude: W is PSD of rank K, so negative eigenvalues of A are noise
// and selecting by magnitude could import noise directions.

/// Spectral node positions X_hat = U diag(sqrt(max(lambda, 0))) together
/// with the selected eigenvalues (descending, signs preserved).
struct EmbeddingMatrix {
    Matrix x_hat;
    Vector eigenvalues;
    int nonpositive_count = 0;  // selected eigenvalues <= 0; their columns are zero
};

/// Regularized row-normalized positions: row i = x_i / (||x_i|| + tau).
struct NormalizedEmbedding {
    Matrix rows;
    double tau = 0.0;
};

/// Plug-in sparsity estimate: sum_{i != j} A_ij / (n (n-1) K).
inline double estimate_alpha_dense(const Matrix& a, int k) {
    const auto n = a.rows();
    if (n < 2) throw ShapeMismatch("sparsity estimate requires n >= 2");
    if (k < 1) throw ShapeMismatch("sparsity estimate requires K >= 1");
    const double off_sum = a.sum() - a.diagonal().sum();
    return off_sum / (static_cast<double>(n) * static_cast<double>(n - 1) * k);
}

inline double estimate_alpha(const AdjacencyMatrix& a, int k) {
    return estimate_alpha_dense(a.entries(), k);
}

/// Recommended regularizer: tau = c_tau * alpha_hat^0.2 * K^1.5 / n^0.3.
inline double regularizer_tau(double alpha_hat, int k, int n, double c_tau = 0.1) {
    if (!(alpha_hat > 0.0))
        throw NonpositiveAlpha("sparsity estimate " + std::to_string(alpha_hat) +
                               " is not positive; an empty graph cannot be embedded");
    return c_tau * std::pow(alpha_hat, 0.2) * std::pow(static_cast<double>(k), 1.5) /
           std::pow(static_cast<double>(n), 0.3);
}

/// Embedding from the K algebraically largest eigenpairs of a dense
/// symmetric matrix. Non-positive selected eigenvalues zero their columns
/// (sparse graphs can produce them); if all K are non-positive the
/// spectrum carries no signal and DeficientSpectrum is thrown.
inline EmbeddingMatrix spectral_embedding_dense(const Matrix& a, int k) {
    const auto n = a.rows();
    if (a.cols() != n || n < 1) throw ShapeMismatch("embedding requires a square matrix");
    if (k < 1 || k > n) throw ShapeMismatch("embedding requires 1 <= K <= n");

    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");

    // Eigen returns ascending order; take the top K, largest first.
    EmbeddingMatrix result;
    result.eigenvalues = Vector(k);
    result.x_hat = Matrix(n, k);
    for (int c = 0; c < k; ++c) {
        const auto src = n - 1 - c;
        const double lambda = es.eigenvalues()(src);
        result.eigenvalues(c) = lambda;
        if (lambda > 0.0) {
            result.x_hat.col(c) = es.eigenvectors().col(src) * std::sqrt(lambda);
        } else {
            result.x_hat.col(c).setZero();
            ++result.nonpositive_count;
        }
    }
    if (result.nonpositive_count == k)
        throw DeficientSpectrum("all " + std::to_string(k) +
                                " leading eigenvalues are non-positive");
    return result;
}

inline EmbeddingMatrix spectral_embedding(const AdjacencyMatrix& a, int k) {
    return spectral_embedding_dense(a.entries(), k);
}

/// Row-wise regularized normalization; zero rows stay zero since the
/// denominator is at least tau.
inline NormalizedEmbedding regularized_row_normalize(const EmbeddingMatrix& x, double tau) {
    if (!(tau > 0.0)) throw EntryOutOfRange("tau must be positive");
    NormalizedEmbedding out;
    out.tau = tau;
    out.rows = x.x_hat;
    for (Eigen::Index i = 0; i < out.rows.rows(); ++i)
        out.rows.row(i) /= x.x_hat.row(i).norm() + tau;
    return out;
}

}  // namespace occam
