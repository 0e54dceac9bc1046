#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "occam/errors.hpp"
#include "occam/types.hpp"

namespace occam {

/// A row -> column matching over a square cost matrix. perm[k] is the
/// column matched to row k; value is the objective evaluated by
/// assignment_value (min-sum) or the bottleneck cost (min-max).
struct Assignment {
    std::vector<int> perm;
    double value = 0.0;
};

/// Canonical objective evaluation: costs summed in row order, so both
/// search routes report bit-identical values for identical permutations.
inline double assignment_value(const Matrix& cost, const std::vector<int>& perm) {
    double total = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) total += cost(static_cast<int>(k), perm[k]);
    return total;
}

inline void check_square(const Matrix& cost) {
    if (cost.rows() != cost.cols() || cost.rows() < 1)
        throw ShapeMismatch("assignment requires a nonempty square cost matrix");
}

/// Exhaustive min-sum search; returns the lexicographically smallest
/// optimal permutation. Intended for K <= 8 (8! = 40320).
inline Assignment min_sum_assignment_brute(const Matrix& cost) {
    check_square(cost);
    const int k = static_cast<int>(cost.rows());
    std::vector<int> perm(k), best(k);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    double best_value = assignment_value(cost, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double v = assignment_value(cost, perm);
        if (v < best_value) {
            best_value = v;
            best = perm;
        }
    }
    return {best, best_value};
}

/// O(K^3) Hungarian algorithm with row/column potentials.
inline Assignment min_sum_assignment_hungarian(const Matrix& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    // 1-indexed internals; p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) perm[p[j] - 1] = j - 1;
    return {perm, assignment_value(cost, perm)};
}

/// Min-sum assignment: exhaustive for K <= 8, Hungarian above.
inline Assignment min_sum_assignment(const Matrix& cost) {
    check_square(cost);
    return cost.rows() <= 8 ? min_sum_assignment_brute(cost)
                            : min_sum_assignment_hungarian(cost);
}

namespace detail {

// Kuhn augmenting-path matching restricted to edges with cost <= limit.
inline bool try_augment(const Matrix& cost, double limit, int row, std::vector<int>& match_col,
                        std::vector<char>& visited) {
    const int n = static_cast<int>(cost.rows());
    for (int j = 0; j < n; ++j) {
        if (visited[j] || cost(row, j) > limit) continue;
        visited[j] = 1;
        if (match_col[j] < 0 || try_augment(cost, limit, match_col[j], match_col, visited)) {
            match_col[j] = row;
            return true;
        }
    }
    return false;
}

inline bool perfect_matching_under(const Matrix& cost, double limit, std::vector<int>& match_col) {
    const int n = static_cast<int>(cost.rows());
    match_col.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        std::vector<char> visited(n, 0);
        if (!try_augment(cost, limit, i, match_col, visited)) return false;
    }
    return true;
}

}  // namespace detail

/// Exhaustive min-max search (lexicographically smallest optimum).
inline Assignment bottleneck_assignment_brute(const Matrix& cost) {
    check_square(cost);
    const int k = static_cast<int>(cost.rows());
    std::vector<int> perm(k), best(k);
    std::iota(perm.begin(), perm.end(), 0);
    auto bottleneck = [&](const std::vector<int>& p) {
        double m = 0.0;
        for (int i = 0; i < k; ++i) m = std::max(m, cost(i, p[i]));
        return m;
    };
    best = perm;
    double best_value = bottleneck(perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double v = bottleneck(perm);
        if (v < best_value) {
            best_value = v;
            best = perm;
        }
    }
    return {best, best_value};
}

/// Min-max (bottleneck) assignment. Exhaustive for K <= 8; otherwise exact
/// binary search over the K^2 candidate costs with an augmenting-path
/// feasibility check, so no precision is lost to thresholding.
inline Assignment bottleneck_assignment(const Matrix& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.rows());
    if (n <= 8) return bottleneck_assignment_brute(cost);

    std::vector<double> candidates(cost.data(), cost.data() + n * n);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<int> match_col;
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::perfect_matching_under(cost, candidates[mid], match_col))
            hi = mid;
        else
            lo = mid + 1;
    }
    detail::perfect_matching_under(cost, candidates[lo], match_col);
    std::vector<int> perm(n, -1);
    for (int j = 0; j < n; ++j) perm[match_col[j]] = j;
    return {perm, candidates[lo]};
}

}  // namespace occam
