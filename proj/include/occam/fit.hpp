#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>

#include "occam/errors.hpp"
#include "occam/kmedians.hpp"
#include "occam/spectral.hpp"
#include "occam/types.hpp"

namespace occam {

// The end-to-end estimator: embed the adjacency matrix, regularize and
// row-normalize, cluster with K-medians to recover the community centers
// (estimating B^{1/2}), project every node onto the centers, and
// row-normalize the projection coefficients into continuous memberships.

struct OccamOptions {
    double c_tau = 0.1;
    std::optional<double> tau_override;
    KMediansConfig kmedians;
    /// Binarization threshold; defaults to 1/K at fit time.
    std::optional<double> threshold;
    std::uint64_t seed = 0;
};

struct OccamResult {
    MembershipMatrix z_hat;  // continuous memberships, nonnegative unit-L2 rows
    Matrix s_hat;            // K x K estimated centers
    EmbeddingMatrix x_hat;
    double tau = 0.0;
    double alpha_hat = 0.0;
    BinaryMatrix binary;  // 1(z_hat >= threshold)
    double loss = 0.0;    // final K-medians sample loss
};

/// Unnormalized projection coefficients Y = X* S^T (S S^T)^{-1}, computed
/// by solving the K x K system (no explicit inverse). Throws
/// SingularCenters when cond(S S^T) exceeds 1e12.
inline Matrix project_memberships(const NormalizedEmbedding& x_norm, const Matrix& s_hat) {
    if (x_norm.rows.cols() != s_hat.cols())
        throw ShapeMismatch("embedding and centers must share dimension");
    const Matrix gram = s_hat * s_hat.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues().minCoeff();
    const double lambda_max = es.eigenvalues().maxCoeff();
    if (!(lambda_min > 0.0) || lambda_max / lambda_min > 1e12)
        throw SingularCenters("center Gram matrix is numerically singular");
    // Y^T = gram^{-1} S X^T, solved column-block at once.
    return gram.ldlt().solve(s_hat * x_norm.rows.transpose()).transpose();
}

/// Row-normalizes projection coefficients into memberships: negative
/// entries clamp to zero, rows scale to unit L2 norm. A row that clamps
/// to (numerically) all zeros falls back to the pure indicator of the
/// center nearest to the pre-clamp row.
inline MembershipMatrix normalize_memberships(const Matrix& y_hat, const Matrix& s_hat) {
    Matrix z = y_hat.cwiseMax(0.0);
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double norm = z.row(i).norm();
        if (norm >= 1e-12) {
            z.row(i) /= norm;
            continue;
        }
        Eigen::Index nearest = 0;
        double best = (y_hat.row(i) - s_hat.row(0)).norm();
        for (Eigen::Index c = 1; c < s_hat.rows(); ++c) {
            const double d = (y_hat.row(i) - s_hat.row(c)).norm();
            if (d < best) {
                best = d;
                nearest = c;
            }
        }
        z.row(i).setZero();
        z(i, nearest) = 1.0;
    }
    return MembershipMatrix(std::move(z));
}

/// Binarization at threshold t, inclusive: Gamma_ik = 1(Z_ik >= t). For
/// t <= 1/sqrt(K) every row keeps at least one community, since the max
/// entry of a nonnegative unit-L2 K-vector is at least 1/sqrt(K). t = 1 is
/// allowed because the K=1 default threshold is 1/K = 1, where the
/// inclusive comparison keeps the exact ones.
inline BinaryMatrix threshold_binary(const MembershipMatrix& z, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw EntryOutOfRange("threshold must lie in (0, 1]");
    BinaryMatrix gamma(z.nodes(), z.communities());
    for (Eigen::Index i = 0; i < gamma.rows(); ++i)
        for (Eigen::Index j = 0; j < gamma.cols(); ++j)
            gamma(i, j) = z.entries()(i, j) >= t ? 1 : 0;
    return gamma;
}

/// Full pipeline on a dense symmetric matrix. This is also the noiseless
/// hook: passing W instead of a sampled A keeps every stage exact.
inline OccamResult fit_matrix(const Matrix& a, int k, const OccamOptions& opts) {
    const auto n = a.rows();
    if (k < 1 || k > n) throw ShapeMismatch("fit requires 1 <= K <= n");
    if (!(opts.c_tau > 0.0)) throw EntryOutOfRange("c_tau must be positive");

    const double alpha_hat = estimate_alpha_dense(a, k);
    const double tau = opts.tau_override
                           ? *opts.tau_override
                           : regularizer_tau(alpha_hat, k, static_cast<int>(n), opts.c_tau);
    EmbeddingMatrix x_hat = spectral_embedding_dense(a, k);
    const NormalizedEmbedding x_norm = regularized_row_normalize(x_hat, tau);
    const ClusteringResult clustering =
        fit_kmedians(x_norm.rows, k, opts.kmedians, derive_seed(opts.seed, 0x6b6d, 0));
    const Matrix y_hat = project_memberships(x_norm, clustering.centers);
    MembershipMatrix z_hat = normalize_memberships(y_hat, clustering.centers);

    const double threshold = opts.threshold ? *opts.threshold : 1.0 / k;
    BinaryMatrix binary = threshold_binary(z_hat, threshold);
    return {std::move(z_hat), clustering.centers, std::move(x_hat),
            tau,              alpha_hat,          std::move(binary),
            clustering.loss};
}

/// Fits the model to an observed graph with K communities.
inline OccamResult fit(const AdjacencyMatrix& a, int k, const OccamOptions& opts) {
    return fit_matrix(a.entries(), k, opts);
}

}  // namespace occam
