#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>

#include "occam/errors.hpp"

namespace occam {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BinaryMatrix = Eigen::MatrixXi;

// Domain types are immutable after construction and validate only their
// structural invariants (shape, symmetry, value ranges that make downstream
// algebra meaningful). The statistical identifiability conditions are
// checked separately by validate_identifiability, which reports rather
// than throws, so deliberately invalid parameter sets can be constructed
// and diagnosed.

/// K x K scaled connectivity matrix B. Symmetry is enforced here; the unit
/// diagonal and positive definiteness of condition I1 are reported by the
/// validator.
class ConnectivityMatrix {
public:
    explicit ConnectivityMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw ShapeMismatch("connectivity matrix must be square and nonempty");
        const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12)
            throw ShapeMismatch("connectivity matrix must be symmetric (max |B - B^T| = " +
                                std::to_string(asym) + ")");
    }

    const Matrix& entries() const noexcept { return entries_; }
    int dim() const noexcept { return static_cast<int>(entries_.rows()); }

private:
    Matrix entries_;
};

/// n x K community membership propensities Z. Rows of a model-valid Z are
/// nonnegative with unit L2 norm (condition I2); both are validator-checked.
class MembershipMatrix {
public:
    explicit MembershipMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() < 1 || entries_.cols() < 1)
            throw ShapeMismatch("membership matrix must be nonempty");
    }

    const Matrix& entries() const noexcept { return entries_; }
    int nodes() const noexcept { return static_cast<int>(entries_.rows()); }
    int communities() const noexcept { return static_cast<int>(entries_.cols()); }

private:
    Matrix entries_;
};

/// Per-node degree-correction multipliers theta.
///
/// Carries the mean of the law the entries were sampled from, when known:
/// condition RI3 constrains the law's mean, condition I3 the empirical
/// mean, and the validator picks the check accordingly.
class DegreeParams {
public:
    explicit DegreeParams(Vector theta, std::optional<double> law_mean = std::nullopt)
        : theta_(std::move(theta)), law_mean_(law_mean) {
        if (theta_.size() < 1) throw ShapeMismatch("theta must be nonempty");
    }

    const Vector& theta() const noexcept { return theta_; }
    int size() const noexcept { return static_cast<int>(theta_.size()); }
    std::optional<double> law_mean() const noexcept { return law_mean_; }

private:
    Vector theta_;
    std::optional<double> law_mean_;
};

/// Full parameter set (alpha, Theta, Z, B) of the overlapping continuous
/// community assignment model.
class ModelParams {
public:
    ModelParams(double alpha, DegreeParams theta, MembershipMatrix z, ConnectivityMatrix b)
        : alpha_(alpha), theta_(std::move(theta)), z_(std::move(z)), b_(std::move(b)) {
        if (alpha_ < 0.0) throw EntryOutOfRange("alpha must be nonnegative");
        if (theta_.size() != z_.nodes())
            throw ShapeMismatch("theta length must equal membership rows");
        if (z_.communities() != b_.dim())
            throw ShapeMismatch("membership columns must equal connectivity dimension");
    }

    double alpha() const noexcept { return alpha_; }
    const DegreeParams& theta() const noexcept { return theta_; }
    const MembershipMatrix& z() const noexcept { return z_; }
    const ConnectivityMatrix& b() const noexcept { return b_; }
    int nodes() const noexcept { return z_.nodes(); }
    int communities() const noexcept { return z_.communities(); }

private:
    double alpha_;
    DegreeParams theta_;
    MembershipMatrix z_;
    ConnectivityMatrix b_;
};

/// Observed graph: binary, exactly symmetric, zero diagonal.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw ShapeMismatch("adjacency matrix must be square and nonempty");
        const auto n = entries_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (entries_(i, i) != 0.0)
                throw EntryOutOfRange("adjacency diagonal must be zero");
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = entries_(i, j);
                if (v != 0.0 && v != 1.0)
                    throw EntryOutOfRange("adjacency entries must be 0 or 1");
                if (v != entries_(j, i))
                    throw ShapeMismatch("adjacency matrix must be exactly symmetric");
            }
        }
    }

    const Matrix& entries() const noexcept { return entries_; }
    int nodes() const noexcept { return static_cast<int>(entries_.rows()); }

    /// Number of undirected edges.
    long edge_count() const noexcept {
        return static_cast<long>(entries_.sum() / 2.0 + 0.5);
    }

private:
    Matrix entries_;
};

/// Expected edge probabilities W = E[A]. Off-diagonal entries are checked
/// to lie in [0, 1]; the diagonal is carried through as computed but never
/// used (self-loops are not sampled).
class EdgeProbabilityMatrix {
public:
    explicit EdgeProbabilityMatrix(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw ShapeMismatch("edge probability matrix must be square and nonempty");
        const auto n = entries_.rows();
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = entries_(i, j);
                if (!(v >= 0.0 && v <= 1.0))
                    throw EntryOutOfRange("edge probability out of [0,1] at (" +
                                          std::to_string(i) + "," + std::to_string(j) +
                                          "): " + std::to_string(v));
                if (v != entries_(j, i))
                    throw ShapeMismatch("edge probability matrix must be exactly symmetric");
            }
        }
    }

    const Matrix& entries() const noexcept { return entries_; }
    int nodes() const noexcept { return static_cast<int>(entries_.rows()); }

private:
    Matrix entries_;
};

}  // namespace occam
