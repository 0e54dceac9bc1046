#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "occam/assignment.hpp"
#include "occam/errors.hpp"
#include "occam/types.hpp"

namespace occam {

// The generative model: W = alpha * Theta Z B Z^T Theta, with A sampled as
// independent Bernoulli(W_ij) on the upper triangle. This header holds the
// parameter-level operations: the expected-probability computation, the
// identifiability diagnostics, and the matrix square-root machinery the
// planted-partition example exercises in closed form.

struct ConditionReport {
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    ConditionReport i1;  // B symmetric positive definite with unit diagonal
    ConditionReport i2;  // Z nonnegative, unit rows, a pure node per community
    ConditionReport i3;  // theta positive with mean 1 (law mean when sampled)

    bool all_pass() const noexcept { return i1.pass && i2.pass && i3.pass; }
};

/// Tolerance below which a membership entry counts as an exact 1; row
/// normalization perturbs exact ones, so the pure-node test uses
/// Z_ik >= 1 - kPureNodeTol instead of equality.
inline constexpr double kPureNodeTol = 1e-8;

/// W = alpha * Theta Z B Z^T Theta.
///
/// The upper triangle is computed once and mirrored, so the result is
/// bitwise symmetric. Off-diagonal entries outside [0, 1] throw
/// EntryOutOfRange: the model is misconfigured and clipping would silently
/// corrupt the degree calibration. Diagonal entries are reported as
/// computed; self-loops are never sampled.
inline EdgeProbabilityMatrix expected_matrix(const ModelParams& params) {
    const int n = params.nodes();
    const Matrix& z = params.z().entries();
    const Vector& theta = params.theta().theta();
    const Matrix zb = z * params.b().entries();  // n x K

    Matrix w(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = params.alpha() * theta(i) * theta(j) * zb.row(i).dot(z.row(j));
            w(i, j) = v;
            w(j, i) = v;
            if (i != j && !(v >= 0.0 && v <= 1.0))
                throw EntryOutOfRange("expected edge probability out of [0,1] at (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      "): " + std::to_string(v));
        }
    }
    return EdgeProbabilityMatrix(std::move(w));
}

/// Checks the identifiability conditions I1-I3 and reports pass/fail per
/// condition. Diagnostic only; never throws.
///
/// I3 is mode-aware: for theta carrying a sampling law, the law's mean is
/// checked against 1 (condition RI3); otherwise the empirical mean is
/// (condition I3). The hub law of the simulation studies has mean 4.8 and
/// deliberately fails here -- its scale is absorbed into alpha by the
/// degree calibration, so the reported alpha differs from a mean-1
/// parameterization by (E theta)^2.
inline ValidationReport validate_identifiability(const ModelParams& params,
                                                 double mean_tol = 1e-6) {
    ValidationReport report;
    const Matrix& b = params.b().entries();
    const int k = params.communities();

    // I1: unit diagonal, strictly positive definite. Symmetry is enforced
    // by the ConnectivityMatrix type.
    for (int i = 0; i < k; ++i) {
        if (std::abs(b(i, i) - 1.0) > kPureNodeTol) {
            report.i1 = {false, "B diagonal entry " + std::to_string(i) + " is " +
                                    std::to_string(b(i, i)) + ", expected 1"};
            break;
        }
    }
    if (report.i1.pass) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
        const double lambda_min = es.eigenvalues().minCoeff();
        if (!(lambda_min > 0.0))
            report.i1 = {false, "B is not strictly positive definite (lambda_min = " +
                                    std::to_string(lambda_min) + ")"};
    }

    // I2: nonnegative entries, unit L2 rows, at least one pure node per
    // community.
    const Matrix& z = params.z().entries();
    if (z.minCoeff() < 0.0) {
        report.i2 = {false, "Z has negative entries"};
    } else {
        for (int i = 0; i < z.rows() && report.i2.pass; ++i) {
            if (std::abs(z.row(i).norm() - 1.0) > 1e-10)
                report.i2 = {false, "Z row " + std::to_string(i) + " has norm " +
                                        std::to_string(z.row(i).norm())};
        }
        for (int c = 0; c < k && report.i2.pass; ++c) {
            if (z.col(c).maxCoeff() < 1.0 - kPureNodeTol)
                report.i2 = {false, "community " + std::to_string(c) + " has no pure node"};
        }
    }

    // I3 / RI3.
    const Vector& theta = params.theta().theta();
    if (theta.minCoeff() <= 0.0) {
        report.i3 = {false, "theta has non-positive entries"};
    } else {
        const auto law_mean = params.theta().law_mean();
        const double mean = law_mean ? *law_mean : theta.mean();
        if (std::abs(mean - 1.0) > mean_tol)
            report.i3 = {false, std::string(law_mean ? "theta law mean " : "theta mean ") +
                                    std::to_string(mean) + " differs from 1"};
    }

    return report;
}

/// Symmetric PSD square root via eigendecomposition: S = V sqrt(L) V^T.
///
/// Eigenvalues in [-1e-8, 0] are clamped to zero (roundoff); anything
/// below -1e-8 throws NotPsd.
inline Matrix sqrt_psd(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw ShapeMismatch("sqrt_psd requires a nonempty square matrix");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw ShapeMismatch("sqrt_psd requires a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Vector lambda = es.eigenvalues();
    for (int i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -1e-8)
            throw NotPsd("eigenvalue " + std::to_string(lambda(i)) + " below PSD tolerance");
        if (lambda(i) < 0.0) lambda(i) = 0.0;
    }
    const Matrix s = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
    return 0.5 * (s + s.transpose());
}

/// Planted-partition connectivity: B = (1 - rho) I + rho 11^T.
/// Eigenvalues are 1 + (K-1) rho (once) and 1 - rho (K-1 times).
inline ConnectivityMatrix planted_partition_b(int k, double rho) {
    if (k < 1) throw ShapeMismatch("planted partition requires K >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw EntryOutOfRange("planted partition requires rho in [0, 1)");
    Matrix b = Matrix::Constant(k, k, rho);
    b.diagonal().setOnes();
    return ConnectivityMatrix(std::move(b));
}

/// Closed form for the planted-partition B^{1/2}: diagonal entries
/// (sqrt((K-1)rho + 1) + (K-1) sqrt(1-rho)) / K and off-diagonal entries
/// (sqrt((K-1)rho + 1) - sqrt(1-rho)) / K. Serves as the independent
/// oracle against sqrt_psd.
inline Matrix planted_partition_sqrt_closed_form(int k, double rho) {
    if (k < 1) throw ShapeMismatch("planted partition requires K >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw EntryOutOfRange("planted partition requires rho in [0, 1)");
    const double top = std::sqrt((k - 1) * rho + 1.0);
    const double bottom = std::sqrt(1.0 - rho);
    const double diag = (top + (k - 1) * bottom) / k;
    const double off = (top - bottom) / k;
    Matrix s = Matrix::Constant(k, k, off);
    s.diagonal().setConstant(diag);
    return s;
}

/// Hausdorff distance between two center sets:
/// min over permutations sigma of max_k ||S_k - T_sigma(k)||_2.
inline double hausdorff_centers_distance(const Matrix& s, const Matrix& t) {
    if (s.rows() != t.rows() || s.cols() != t.cols())
        throw ShapeMismatch("center sets must have identical shape");
    const int k = static_cast<int>(s.rows());
    Matrix cost(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cost(i, j) = (s.row(i) - t.row(j)).norm();
    return bottleneck_assignment(cost).value;
}

}  // namespace occam
