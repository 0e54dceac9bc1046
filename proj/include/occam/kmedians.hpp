#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "occam/errors.hpp"
#include "occam/rng.hpp"
#include "occam/types.hpp"

namespace occam {

// K-medians clustering: minimizes the mean unsquared Euclidean distance to
// the nearest center, matching the sample loss
//   L_n(Q; S) = (1/n) sum_i min_k ||Q_i - S_k||_2.
// Centers are geometric medians (Weiszfeld iteration); the outer loop is
// Lloyd-style alternation with distance-weighted seeding and restarts.

struct KMediansConfig {
    int restarts = 10;
    int max_outer_iters = 100;
    double weiszfeld_tol = 1e-8;
    int weiszfeld_max_iters = 200;
    double loss_tol = 1e-10;
    /// When set, restart 0 starts from these centers instead of random
    /// seeding (used by oracle tests that plant the true centers).
    std::optional<Matrix> initial_centers;
};

struct ClusteringResult {
    Matrix centers;                // K x d, row k is center k
    std::vector<int> assignments;  // argmin-distance center per row, lowest index on ties
    double loss = 0.0;
    bool converged = false;
    int restarts_used = 0;
};

inline double kmedians_loss(const Matrix& q, const Matrix& centers) {
    if (q.cols() != centers.cols())
        throw ShapeMismatch("points and centers must share dimension");
    double total = 0.0;
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < centers.rows(); ++c)
            best = std::min(best, (q.row(i) - centers.row(c)).norm());
        total += best;
    }
    return total / static_cast<double>(q.rows());
}

/// Geometric median of a point set (rows), computed by Weiszfeld iteration
/// started at the coordinate-wise mean.
///
/// When an iterate lands on a data point the subgradient condition
/// ||sum_{p != x} (p - x)/||p - x|||| <= multiplicity decides optimality;
/// if not optimal, the iterate is nudged by tol along the descent
/// direction and iteration continues. The returned point is the best of
/// the final iterate, the mean, and every data point, so the output never
/// loses to a feasible candidate.
inline Vector geometric_median(const Matrix& points, double tol = 1e-8, int max_iters = 200) {
    const auto m = points.rows();
    if (m < 1) throw TooFewPoints("geometric median of an empty set");
    if (m == 1) return points.row(0);

    auto objective = [&](const Vector& x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) s += (points.row(i).transpose() - x).norm();
        return s;
    };

    const Vector mean = points.colwise().mean();
    Vector x = mean;
    for (int iter = 0; iter < max_iters; ++iter) {
        Vector weighted = Vector::Zero(points.cols());
        Vector pull = Vector::Zero(points.cols());  // subgradient direction toward the mass
        double weight_sum = 0.0;
        int coincident = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const Vector diff = points.row(i).transpose() - x;
            const double dist = diff.norm();
            if (dist <= 1e-12) {
                ++coincident;
                continue;
            }
            weighted += points.row(i).transpose() / dist;
            pull += diff / dist;
            weight_sum += 1.0 / dist;
        }
        if (coincident > 0) {
            if (pull.norm() <= static_cast<double>(coincident)) break;  // optimal data point
            x += tol * pull.normalized();
            continue;
        }
        const Vector next = weighted / weight_sum;
        const double step = (next - x).norm();
        x = next;
        if (step <= tol) break;
    }

    double best_obj = objective(x);
    if (objective(mean) < best_obj) {
        x = mean;
        best_obj = objective(mean);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const Vector candidate = points.row(i);
        if (objective(candidate) < best_obj) {
            x = candidate;
            best_obj = objective(candidate);
        }
    }
    return x;
}

namespace detail {

inline void assign_rows(const Matrix& q, const Matrix& centers, std::vector<int>& assignments) {
    const auto n = q.rows();
    const auto k = centers.rows();
    assignments.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_dist = (q.row(i) - centers.row(0)).norm();
        for (Eigen::Index c = 1; c < k; ++c) {
            const double d = (q.row(i) - centers.row(c)).norm();
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(c);
            }
        }
        assignments[static_cast<std::size_t>(i)] = best;
    }
}

/// Distance-weighted seeding with unsquared distances: first center
/// uniform, each next center drawn with probability proportional to the
/// current distance to the nearest chosen center.
inline Matrix seed_centers(const Matrix& q, int k, Rng& rng) {
    const auto n = q.rows();
    Matrix centers(k, q.cols());
    centers.row(0) = q.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
    Vector min_dist(n);
    for (Eigen::Index i = 0; i < n; ++i) min_dist(i) = (q.row(i) - centers.row(0)).norm();
    for (int c = 1; c < k; ++c) {
        const double total = min_dist.sum();
        Eigen::Index pick;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += min_dist(i);
                if (target < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = q.row(pick);
        for (Eigen::Index i = 0; i < n; ++i)
            min_dist(i) = std::min(min_dist(i), (q.row(i) - centers.row(c)).norm());
    }
    return centers;
}

struct LloydOutcome {
    Matrix centers;
    double loss = 0.0;
    bool converged = false;
};

inline LloydOutcome lloyd_from(const Matrix& q, Matrix centers, const KMediansConfig& cfg) {
    const auto n = q.rows();
    const int k = static_cast<int>(centers.rows());
    std::vector<int> assignments;
    double prev_loss = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        assign_rows(q, centers, assignments);

        // Reseed empty clusters to the row farthest from its own center.
        for (int c = 0; c < k; ++c) {
            if (std::find(assignments.begin(), assignments.end(), c) != assignments.end())
                continue;
            Eigen::Index worst = 0;
            double worst_dist = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double d =
                    (q.row(i) - centers.row(assignments[static_cast<std::size_t>(i)])).norm();
                if (d > worst_dist) {
                    worst_dist = d;
                    worst = i;
                }
            }
            centers.row(c) = q.row(worst);
            assign_rows(q, centers, assignments);
        }

        // Median update; keep the old center when the median iterate does
        // not improve the cluster objective, so the loss never increases.
        for (int c = 0; c < k; ++c) {
            std::vector<Eigen::Index> members;
            for (Eigen::Index i = 0; i < n; ++i)
                if (assignments[static_cast<std::size_t>(i)] == c) members.push_back(i);
            // a cluster can stay empty when there are fewer distinct rows
            // than centers; its center is left in place
            if (members.empty()) continue;
            Matrix cluster(static_cast<Eigen::Index>(members.size()), q.cols());
            for (std::size_t r = 0; r < members.size(); ++r) cluster.row(r) = q.row(members[r]);
            const Vector median =
                geometric_median(cluster, cfg.weiszfeld_tol, cfg.weiszfeld_max_iters);
            double old_obj = 0.0, new_obj = 0.0;
            for (Eigen::Index i : members) {
                old_obj += (q.row(i) - centers.row(c)).norm();
                new_obj += (q.row(i).transpose() - median).norm();
            }
            if (new_obj < old_obj) centers.row(c) = median.transpose();
        }

        const double loss = kmedians_loss(q, centers);
        if (loss > prev_loss + 1e-12)
            throw std::logic_error("k-medians loss increased across an iteration");
        if (prev_loss - loss < cfg.loss_tol) {
            converged = true;
            prev_loss = loss;
            break;
        }
        prev_loss = loss;
    }
    return {std::move(centers), prev_loss, converged};
}

}  // namespace detail

/// K-medians fit with restarts. Deterministic given (q, cfg, seed):
/// restart r draws from the stream derive_seed(seed, r, 0) and the best
/// restart wins by (loss, restart index).
inline ClusteringResult fit_kmedians(const Matrix& q, int k, const KMediansConfig& cfg,
                                     std::uint64_t seed) {
    const auto n = q.rows();
    if (k < 1) throw ShapeMismatch("need at least one cluster");
    if (n < k)
        throw TooFewPoints("cannot place " + std::to_string(k) + " centers on " +
                           std::to_string(n) + " points");
    if (cfg.initial_centers &&
        (cfg.initial_centers->rows() != k || cfg.initial_centers->cols() != q.cols()))
        throw ShapeMismatch("initial centers must be K x d");

    ClusteringResult best;
    best.loss = std::numeric_limits<double>::infinity();
    const int restarts = std::max(1, cfg.restarts);
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r), 0));
        Matrix init = (r == 0 && cfg.initial_centers) ? *cfg.initial_centers
                                                      : detail::seed_centers(q, k, rng);
        auto outcome = detail::lloyd_from(q, std::move(init), cfg);
        if (outcome.loss < best.loss) {
            best.centers = std::move(outcome.centers);
            best.loss = outcome.loss;
            best.converged = outcome.converged;
        }
    }
    best.restarts_used = restarts;
    detail::assign_rows(q, best.centers, best.assignments);
    best.loss = kmedians_loss(q, best.centers);
    return best;
}

}  // namespace occam
