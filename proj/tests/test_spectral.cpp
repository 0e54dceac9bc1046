#include <catch2/catch_amalgamated.hpp>

#include "occam/sampler.hpp"
#include "occam/spectral.hpp"

#include <cmath>

using namespace occam;

namespace {

// frozen: 0.1 * 0.04^0.2 * 3^1.5 / 500^0.3 evaluated at 40-digit precision
constexpr double kTauOracle = 0.042306089034128324543;

AdjacencyMatrix complete_graph(int n) {
    Matrix a = Matrix::Ones(n, n);
    a.diagonal().setZero();
    return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix two_cliques(int m) {
    const int n = 2 * m;
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) {
                a(i, j) = 1.0;
                a(m + i, m + j) = 1.0;
            }
    return AdjacencyMatrix(std::move(a));
}

}  // namespace

TEST_CASE("alpha estimate on the complete graph", "[spectral]") {
    REQUIRE(estimate_alpha(complete_graph(4), 2) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("alpha estimate on the empty graph is zero", "[spectral]") {
    REQUIRE(estimate_alpha(AdjacencyMatrix(Matrix::Zero(5, 5)), 2) == 0.0);
}

TEST_CASE("alpha estimate counts ordered pairs", "[spectral]") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    REQUIRE(estimate_alpha(AdjacencyMatrix(a), 1) == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("alpha estimate times K(n-1) is the mean degree", "[spectral]") {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 20 + static_cast<int>(rng.below(30));
        Matrix a = Matrix::Zero(n, n);
        long twice_edges = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(0.2)) {
                    a(i, j) = a(j, i) = 1.0;
                    twice_edges += 2;
                }
        const int k = 1 + static_cast<int>(rng.below(4));
        const double alpha_hat = estimate_alpha(AdjacencyMatrix(a), k);
        const double mean_degree = static_cast<double>(twice_edges) / n;
        REQUIRE(alpha_hat * k * (n - 1) == Catch::Approx(mean_degree).epsilon(1e-12));
    }
}

TEST_CASE("regularizer matches the frozen hand evaluation", "[spectral]") {
    REQUIRE(regularizer_tau(0.04, 3, 500, 0.1) == Catch::Approx(kTauOracle).margin(1e-12));
}

TEST_CASE("regularizer is linear in its constant", "[spectral]") {
    const double t1 = regularizer_tau(0.07, 4, 800, 0.1);
    const double t2 = regularizer_tau(0.07, 4, 800, 0.2);
    REQUIRE(t2 == Catch::Approx(2.0 * t1).epsilon(1e-15));
}

TEST_CASE("regularizer collapses to the constant at the all-ones point", "[spectral]") {
    REQUIRE(regularizer_tau(1.0, 1, 1, 0.1) == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("regularizer rejects a non-positive sparsity estimate", "[spectral]") {
    REQUIRE_THROWS_AS(regularizer_tau(0.0, 3, 500), NonpositiveAlpha);
    REQUIRE_THROWS_AS(regularizer_tau(-0.1, 3, 500), NonpositiveAlpha);
}

TEST_CASE("two disjoint cliques embed with the known top eigenvalues", "[spectral]") {
    const int m = 8;
    const auto emb = spectral_embedding(two_cliques(m), 2);
    REQUIRE(emb.eigenvalues(0) == Catch::Approx(m - 1.0).margin(1e-9));
    REQUIRE(emb.eigenvalues(1) == Catch::Approx(m - 1.0).margin(1e-9));
    REQUIRE(emb.nonpositive_count == 0);
    // X X^T reconstructs the rank-2 part: within-clique (m-1)/m, cross 0
    const Matrix gram = emb.x_hat * emb.x_hat.transpose();
    REQUIRE(gram(0, 1) == Catch::Approx((m - 1.0) / m).margin(1e-9));
    REQUIRE(std::abs(gram(0, m)) < 1e-9);
}

TEST_CASE("full decomposition reconstructs a PSD matrix", "[spectral]") {
    Rng rng(13);
    const int n = 12;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.uniform() - 0.5;
    Matrix psd = g * g.transpose();
    psd = 0.5 * (psd + psd.transpose());
    const auto emb = spectral_embedding_dense(psd, n);
    REQUIRE((emb.x_hat * emb.x_hat.transpose() - psd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("noiseless W reconstructs exactly at rank K", "[spectral]") {
    SamplerConfig cfg{50,
                      3,
                      OverlapProfile::preset_a(),
                      ThetaLaw::point_mass_one(),
                      planted_partition_b(3, 0.2),
                      8.0,
                      7,
                      Allocation::Deterministic};
    const auto net = generate_network(cfg);
    const auto emb = spectral_embedding_dense(net.w.entries(), 3);
    REQUIRE((emb.x_hat * emb.x_hat.transpose() - net.w.entries()).cwiseAbs().maxCoeff() <
            1e-8);

    // span(X_hat) equals span(Theta Z B^{1/2}): projection residual vanishes
    const Matrix x = std::sqrt(net.alpha) * net.theta.theta().asDiagonal() *
                     net.z.entries() * sqrt_psd(cfg.b.entries());
    Eigen::JacobiSVD<Matrix> svd(emb.x_hat, Eigen::ComputeThinU);
    const Matrix u = svd.matrixU();
    REQUIRE((x - u * (u.transpose() * x)).norm() < 1e-6);
}

TEST_CASE("embedding Gram matrix is deterministic and PSD", "[spectral]") {
    const auto net = generate_network(SamplerConfig{60,
                                                    3,
                                                    OverlapProfile::preset_a(),
                                                    ThetaLaw::point_mass_one(),
                                                    planted_partition_b(3, 0.1),
                                                    8.0,
                                                    3,
                                                    Allocation::Deterministic});
    const auto e1 = spectral_embedding(net.a, 3);
    const auto e2 = spectral_embedding(net.a, 3);
    const Matrix g1 = e1.x_hat * e1.x_hat.transpose();
    const Matrix g2 = e2.x_hat * e2.x_hat.transpose();
    REQUIRE((g1 - g2).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g1, Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("nonpositive selected eigenvalues zero their columns", "[spectral]") {
    // path on 2 nodes: eigenvalues +1 and -1
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = a(1, 0) = 1.0;
    const auto emb = spectral_embedding(AdjacencyMatrix(a), 2);
    REQUIRE(emb.nonpositive_count == 1);
    REQUIRE(emb.x_hat.col(1).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(emb.eigenvalues(1) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("an all-nonpositive spectrum is fatal", "[spectral]") {
    Matrix a = Matrix::Zero(3, 3);
    REQUIRE_THROWS_AS(spectral_embedding_dense(a, 2), DeficientSpectrum);
}

TEST_CASE("row normalization scales by norm plus tau", "[spectral]") {
    EmbeddingMatrix emb;
    emb.x_hat = Matrix(2, 2);
    emb.x_hat << 3.0, 4.0,
                 0.0, 0.0;
    emb.eigenvalues = Vector::Ones(2);
    const auto norm = regularized_row_normalize(emb, 5.0);
    REQUIRE(norm.rows(0, 0) == Catch::Approx(0.3).margin(1e-15));
    REQUIRE(norm.rows(0, 1) == Catch::Approx(0.4).margin(1e-15));
    REQUIRE(norm.rows(1, 0) == 0.0);
    REQUIRE(norm.rows(1, 1) == 0.0);
    REQUIRE(norm.tau == 5.0);
}

TEST_CASE("row normalization approaches unit rows as tau vanishes", "[spectral]") {
    Rng rng(5);
    EmbeddingMatrix emb;
    emb.x_hat = Matrix(10, 3);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 3; ++j) emb.x_hat(i, j) = rng.uniform() + 0.1;
    emb.eigenvalues = Vector::Ones(3);
    const auto norm = regularized_row_normalize(emb, 1e-12);
    for (int i = 0; i < 10; ++i)
        REQUIRE(norm.rows.row(i).norm() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("normalized row norms are monotone in the row norm and in tau", "[spectral]") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform() + 0.01;
        const double b = a + rng.uniform() + 1e-6;
        const double tau1 = rng.uniform() + 1e-3;
        const double tau2 = tau1 + rng.uniform() + 1e-6;
        // strictly increasing in the row norm
        REQUIRE(a / (a + tau1) < b / (b + tau1));
        // strictly decreasing in tau
        REQUIRE(a / (a + tau2) < a / (a + tau1));
    }
}
