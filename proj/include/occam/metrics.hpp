#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "occam/assignment.hpp"
#include "occam/errors.hpp"
#include "occam/types.hpp"

namespace occam {

// Evaluation metrics. exNVI scores binary overlapping memberships via
// normalized conditional entropies, matched over community permutations;
// membership_error is the permutation-matched Frobenius distance
// (1/sqrt(n)) min_P ||Zhat P - Z||_F between continuous memberships.
// Natural logarithms throughout; exNVI is a ratio, so the base cancels.

/// Binary community indicators, n x K with entries in {0, 1}.
class BinaryMembership {
public:
    explicit BinaryMembership(BinaryMatrix gamma) : gamma_(std::move(gamma)) {
        if (gamma_.rows() < 1 || gamma_.cols() < 1)
            throw ShapeMismatch("binary membership must be nonempty");
        for (Eigen::Index i = 0; i < gamma_.rows(); ++i)
            for (Eigen::Index j = 0; j < gamma_.cols(); ++j)
                if (gamma_(i, j) != 0 && gamma_(i, j) != 1)
                    throw EntryOutOfRange("binary membership entries must be 0 or 1");
    }

    const BinaryMatrix& gamma() const noexcept { return gamma_; }
    int nodes() const noexcept { return static_cast<int>(gamma_.rows()); }
    int communities() const noexcept { return static_cast<int>(gamma_.cols()); }

private:
    BinaryMatrix gamma_;
};

/// exNVI value with the minimizing permutation and the per-community
/// normalized conditional entropy pairs it was built from.
struct ExnviBreakdown {
    double value = 0.0;
    std::vector<int> permutation;  // true community k matched to estimated sigma(k)
    std::vector<std::pair<double, double>> per_community;
};

/// Empirical joint entropy of two binary vectors, -sum p log p over the
/// four cells, with 0 log 0 := 0.
inline double binary_joint_entropy(const Eigen::VectorXi& u, const Eigen::VectorXi& v) {
    if (u.size() != v.size() || u.size() < 1)
        throw ShapeMismatch("entropy requires equal-length nonempty vectors");
    long counts[2][2] = {{0, 0}, {0, 0}};
    for (Eigen::Index i = 0; i < u.size(); ++i) ++counts[u(i) ? 1 : 0][v(i) ? 1 : 0];
    const double n = static_cast<double>(u.size());
    double h = 0.0;
    for (const auto& row : counts)
        for (long c : row)
            if (c > 0) {
                const double p = static_cast<double>(c) / n;
                h -= p * std::log(p);
            }
    return h;
}

/// Empirical entropy of one binary vector.
inline double binary_entropy(const Eigen::VectorXi& u) { return binary_joint_entropy(u, u); }

/// Normalized conditional entropy
/// Hbar(gamma_hat_l | gamma_k) = [H(gamma_k, gamma_hat_l) - H(gamma_k)] / H(gamma_k).
///
/// Degenerate convention for H(gamma_k) = 0 (constant column): 0 when the
/// joint entropy is also 0 (the pair is jointly deterministic, a perfect
/// match), 1 otherwise.
inline double conditional_normalized_entropy(const Eigen::VectorXi& gamma_hat_l,
                                             const Eigen::VectorXi& gamma_k) {
    const double h_k = binary_entropy(gamma_k);
    const double h_joint = binary_joint_entropy(gamma_k, gamma_hat_l);
    if (h_k == 0.0) return h_joint == 0.0 ? 0.0 : 1.0;
    return (h_joint - h_k) / h_k;
}

/// Extended normalized variation of information:
/// 1 - min_sigma (1/2K) sum_k [Hbar(gamma_hat_sigma(k)|gamma_k) +
/// Hbar(gamma_k|gamma_hat_sigma(k))]. 1 means perfect recovery.
inline ExnviBreakdown exnvi(const BinaryMembership& gamma, const BinaryMembership& gamma_hat) {
    if (gamma.nodes() != gamma_hat.nodes() || gamma.communities() != gamma_hat.communities())
        throw ShapeMismatch("memberships must have identical shape");
    const int k = gamma.communities();

    Matrix cost(k, k);
    Matrix fwd(k, k), rev(k, k);  // Hbar(hat_l | k) and Hbar(k | hat_l)
    for (int a = 0; a < k; ++a) {
        const Eigen::VectorXi ga = gamma.gamma().col(a);
        for (int b = 0; b < k; ++b) {
            const Eigen::VectorXi hb = gamma_hat.gamma().col(b);
            fwd(a, b) = conditional_normalized_entropy(hb, ga);
            rev(a, b) = conditional_normalized_entropy(ga, hb);
            cost(a, b) = fwd(a, b) + rev(a, b);
        }
    }

    const Assignment match = min_sum_assignment(cost);
    ExnviBreakdown out;
    out.permutation = match.perm;
    out.per_community.reserve(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a)
        out.per_community.push_back({fwd(a, match.perm[a]), rev(a, match.perm[a])});
    out.value = 1.0 - match.value / (2.0 * k);
    out.value = std::clamp(out.value, 0.0, 1.0);  // floating-point guard
    return out;
}

/// Permutation-matched membership error (1/sqrt(n)) min_P ||Zhat P - Z||_F.
/// The squared Frobenius norm decomposes over columns, so an assignment on
/// squared column distances is exact.
inline double membership_error(const MembershipMatrix& z_hat, const MembershipMatrix& z) {
    if (z_hat.nodes() != z.nodes() || z_hat.communities() != z.communities())
        throw ShapeMismatch("memberships must have identical shape");
    const int k = z.communities();
    Matrix cost(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            cost(a, b) = (z_hat.entries().col(b) - z.entries().col(a)).squaredNorm();
    const Assignment match = min_sum_assignment(cost);
    return std::sqrt(std::max(0.0, match.value) / static_cast<double>(z.nodes()));
}

}  // namespace occam
