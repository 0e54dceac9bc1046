#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "occam/core_model.hpp"
#include "occam/rng.hpp"
#include "occam/types.hpp"

namespace occam {

// Synthetic network generation. A node assigned to the intersection of m
// communities {k_1..k_m} gets the membership row Z_ik = m^{-1/2} 1(k in
// subset), so rows always have unit L2 norm. The global scale alpha is
// calibrated so the expected average node degree hits a target.

/// One overlap block: a nonempty community subset and its probability mass.
struct OverlapBlock {
    std::vector<int> communities;  // sorted, unique, 0-based
    double mass = 0.0;
};

class OverlapProfile {
public:
    explicit OverlapProfile(std::vector<OverlapBlock> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty()) throw InvalidProfile("profile has no blocks");
        std::set<std::vector<int>> seen;
        double total = 0.0;
        for (auto& blk : blocks_) {
            if (blk.communities.empty()) throw InvalidProfile("empty community subset");
            std::vector<int> sorted = blk.communities;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidProfile("duplicate community inside a subset");
            if (sorted.front() < 0) throw InvalidProfile("negative community index");
            if (!seen.insert(sorted).second) throw InvalidProfile("duplicate subset in profile");
            blk.communities = std::move(sorted);
            if (!(blk.mass >= 0.0)) throw InvalidProfile("negative block mass");
            total += blk.mass;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidProfile("block masses sum to " + std::to_string(total) +
                                 ", expected 1");
    }

    const std::vector<OverlapBlock>& blocks() const noexcept { return blocks_; }

    int max_community() const noexcept {
        int m = 0;
        for (const auto& blk : blocks_) m = std::max(m, blk.communities.back());
        return m;
    }

    /// Symmetric profile: every m-subset of {0..K-1} gets per_size_mass[m-1],
    /// subsets enumerated in lexicographic order. This is the membership
    /// scheme of the simulation studies, parameterized by
    /// (pi^(1), pi^(2), ...).
    static OverlapProfile symmetric(int k, const std::vector<double>& per_size_mass) {
        std::vector<OverlapBlock> blocks;
        for (int m = 1; m <= static_cast<int>(per_size_mass.size()); ++m) {
            std::vector<int> subset(m);
            std::iota(subset.begin(), subset.end(), 0);
            for (;;) {
                blocks.push_back({subset, per_size_mass[m - 1]});
                // next lexicographic m-subset of {0..k-1}
                int i = m - 1;
                while (i >= 0 && subset[i] == k - m + i) --i;
                if (i < 0) break;
                ++subset[i];
                for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
            }
        }
        return OverlapProfile(std::move(blocks));
    }

    /// K=3 text configuration A: (pi1, pi2, pi3) = (0.3, 0.03, 0.01).
    static OverlapProfile preset_a() { return symmetric(3, {0.3, 0.03, 0.01}); }

    /// K=3 configuration B: (0.25, 0.07, 0.04).
    static OverlapProfile preset_b() { return symmetric(3, {0.25, 0.07, 0.04}); }

    /// The figure-caption variant of A, (0.3, 0.03, 0.03), whose raw masses
    /// sum to 1.02; normalized here to a valid profile.
    static OverlapProfile preset_a_caption() {
        return symmetric(3, {0.3 / 1.02, 0.03 / 1.02, 0.03 / 1.02});
    }

    /// Pure nodes only, equal mass per community.
    static OverlapProfile pure(int k) {
        std::vector<OverlapBlock> blocks;
        for (int c = 0; c < k; ++c) blocks.push_back({{c}, 1.0 / k});
        return OverlapProfile(std::move(blocks));
    }

private:
    std::vector<OverlapBlock> blocks_;
};

/// Discrete degree-parameter law (support, probabilities).
class ThetaLaw {
public:
    ThetaLaw(std::vector<double> values, std::vector<double> probs)
        : values_(std::move(values)), probs_(std::move(probs)) {
        if (values_.empty() || values_.size() != probs_.size())
            throw InvalidProfile("theta law needs matching nonempty support and probabilities");
        double total = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0)) throw InvalidProfile("theta support must be positive");
            if (!(probs_[i] >= 0.0)) throw InvalidProfile("negative theta probability");
            total += probs_[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidProfile("theta probabilities sum to " + std::to_string(total));
    }

    static ThetaLaw point_mass_one() { return ThetaLaw({1.0}, {1.0}); }

    /// 20% hub nodes: P(theta = 1) = 0.8, P(theta = 20) = 0.2. Mean 4.8,
    /// so condition RI3 fails by design; the degree calibration absorbs
    /// the scale into alpha.
    static ThetaLaw hub_default() { return ThetaLaw({1.0, 20.0}, {0.8, 0.2}); }

    static ThetaLaw custom(std::vector<double> values, std::vector<double> probs) {
        return ThetaLaw(std::move(values), std::move(probs));
    }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& probs() const noexcept { return probs_; }

    double mean() const noexcept {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * probs_[i];
        return m;
    }

    bool is_point_mass_one() const noexcept {
        return values_.size() == 1 && values_[0] == 1.0;
    }

private:
    std::vector<double> values_;
    std::vector<double> probs_;
};

enum class Allocation { Deterministic, Multinomial };

struct SamplerConfig {
    int n = 0;
    int k = 0;
    OverlapProfile profile;
    ThetaLaw theta_law;
    ConnectivityMatrix b;
    double target_degree = 0.0;
    std::uint64_t seed = 0;
    Allocation allocation = Allocation::Deterministic;
};

namespace detail {

/// Largest-remainder rounding of n * mass to integer block counts summing
/// to n. Ties go to the lower block index.
inline std::vector<long> largest_remainder_counts(int n, const std::vector<OverlapBlock>& blocks) {
    std::vector<long> counts(blocks.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    long assigned = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const double exact = static_cast<double>(n) * blocks[b].mass;
        counts[b] = static_cast<long>(std::floor(exact));
        assigned += counts[b];
        remainders.push_back({exact - std::floor(exact), b});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    long leftover = n - assigned;
    for (long i = 0; i < leftover; ++i) ++counts[remainders[static_cast<std::size_t>(i)].second];
    return counts;
}

inline void fill_block_row(Matrix& z, int row, const OverlapBlock& blk) {
    const double v = 1.0 / std::sqrt(static_cast<double>(blk.communities.size()));
    for (int c : blk.communities) z(row, c) = v;
}

}  // namespace detail

/// Samples the membership matrix Z.
///
/// Deterministic allocation assigns exactly round(n * pi) nodes per block
/// (largest-remainder rounding fixes the total at n) in profile block
/// order, then shuffles the rows; block counts are therefore invariant
/// across seeds. Multinomial allocation draws each node's block i.i.d.
inline MembershipMatrix sample_memberships(const SamplerConfig& config, Rng& rng) {
    if (config.n < 1) throw InvalidProfile("need at least one node");
    if (config.profile.max_community() >= config.k)
        throw InvalidProfile("profile references community " +
                             std::to_string(config.profile.max_community()) +
                             " but K = " + std::to_string(config.k));
    const auto& blocks = config.profile.blocks();
    Matrix z = Matrix::Zero(config.n, config.k);

    if (config.allocation == Allocation::Deterministic) {
        const auto counts = detail::largest_remainder_counts(config.n, blocks);
        std::vector<int> order(static_cast<std::size_t>(config.n));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        int next = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (long c = 0; c < counts[b]; ++c)
                detail::fill_block_row(z, order[static_cast<std::size_t>(next++)], blocks[b]);
    } else {
        std::vector<double> masses;
        masses.reserve(blocks.size());
        for (const auto& blk : blocks) masses.push_back(blk.mass);
        for (int i = 0; i < config.n; ++i)
            detail::fill_block_row(z, i, blocks[rng.discrete(masses)]);
    }
    return MembershipMatrix(std::move(z));
}

/// i.i.d. draws from a discrete theta law. The result records the law's
/// mean so the validator can apply the RI3 check.
inline DegreeParams sample_degree_params(const ThetaLaw& law, int n, Rng& rng) {
    Vector theta(n);
    const auto& probs = law.probs();
    for (int i = 0; i < n; ++i) theta(i) = law.values()[rng.discrete(probs)];
    return DegreeParams(std::move(theta), law.mean());
}

/// Chooses alpha so the expected average node degree of W equals
/// target_degree: alpha = dbar * n / sum_{i != j} M_ij with
/// M = Theta Z B Z^T Theta.
///
/// Throws DegreeTooLarge if the calibrated alpha would push an
/// off-diagonal probability above 1 (the expected_matrix range check,
/// surfaced early).
inline double calibrate_alpha(const DegreeParams& theta, const MembershipMatrix& z,
                              const ConnectivityMatrix& b, double target_degree) {
    if (!(target_degree > 0.0)) throw EntryOutOfRange("target degree must be positive");
    const int n = z.nodes();
    const Vector& th = theta.theta();
    const Matrix& zm = z.entries();
    const Matrix c = zm * b.entries();

    double total = 0.0, diag = 0.0, max_off = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mii = th(i) * th(i) * c.row(i).dot(zm.row(i));
        diag += mii;
        total += mii;
        for (int j = i + 1; j < n; ++j) {
            const double mij = th(i) * th(j) * c.row(i).dot(zm.row(j));
            total += 2.0 * mij;
            max_off = std::max(max_off, mij);
        }
    }
    const double off_sum = total - diag;
    if (!(off_sum > 0.0))
        throw EntryOutOfRange("expected connectivity mass is zero; cannot calibrate alpha");
    const double alpha = target_degree * n / off_sum;
    if (alpha * max_off > 1.0)
        throw DegreeTooLarge("target degree " + std::to_string(target_degree) +
                             " needs alpha = " + std::to_string(alpha) +
                             ", which drives an edge probability to " +
                             std::to_string(alpha * max_off));
    return alpha;
}

/// Bernoulli sampling of the adjacency matrix. The upper triangle is
/// drawn in row-major order (part of the reproducibility contract) and
/// mirrored; the diagonal is zero.
inline AdjacencyMatrix sample_adjacency(const EdgeProbabilityMatrix& w, Rng& rng) {
    const int n = w.nodes();
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double bit = rng.bernoulli(w.entries()(i, j)) ? 1.0 : 0.0;
            a(i, j) = bit;
            a(j, i) = bit;
        }
    }
    return AdjacencyMatrix(std::move(a));
}

/// A complete sampled network with the parameters that generated it.
struct GeneratedNetwork {
    MembershipMatrix z;
    DegreeParams theta;
    double alpha;
    EdgeProbabilityMatrix w;
    AdjacencyMatrix a;
};

/// End-to-end generation: memberships, degree parameters, density
/// calibration, W, and the Bernoulli draw. Sub-streams are derived from
/// config.seed so each stage is independently reproducible.
inline GeneratedNetwork generate_network(const SamplerConfig& config) {
    if (config.b.dim() != config.k)
        throw ShapeMismatch("connectivity dimension does not match K");
    Rng z_rng(derive_seed(config.seed, 0, 0));
    Rng theta_rng(derive_seed(config.seed, 1, 0));
    Rng edge_rng(derive_seed(config.seed, 2, 0));

    MembershipMatrix z = sample_memberships(config, z_rng);
    DegreeParams theta = sample_degree_params(config.theta_law, config.n, theta_rng);
    const double alpha = calibrate_alpha(theta, z, config.b, config.target_degree);
    EdgeProbabilityMatrix w =
        expected_matrix(ModelParams(alpha, theta, z, config.b));
    AdjacencyMatrix a = sample_adjacency(w, edge_rng);
    return {std::move(z), std::move(theta), alpha, std::move(w), std::move(a)};
}

}  // namespace occam
