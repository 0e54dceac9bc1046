#include <catch2/catch_amalgamated.hpp>

#include "occam/core_model.hpp"
#include "occam/sampler.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace occam;

namespace {

SamplerConfig base_config(int n, std::uint64_t seed,
                          Allocation alloc = Allocation::Deterministic) {
    return SamplerConfig{n,
                         3,
                         OverlapProfile::preset_a(),
                         ThetaLaw::point_mass_one(),
                         planted_partition_b(3, 0.1),
                         10.0,
                         seed,
                         alloc};
}

// histogram of row patterns, keyed by the sorted support set
std::map<std::vector<int>, int> pattern_counts(const MembershipMatrix& z) {
    std::map<std::vector<int>, int> counts;
    for (int i = 0; i < z.nodes(); ++i) {
        std::vector<int> support;
        for (int c = 0; c < z.communities(); ++c)
            if (z.entries()(i, c) > 0.0) support.push_back(c);
        ++counts[support];
    }
    return counts;
}

}  // namespace

TEST_CASE("configuration A at n=100 gives the exact block counts", "[sampler]") {
    Rng rng(4);
    const auto z = sample_memberships(base_config(100, 0), rng);
    const auto counts = pattern_counts(z);
    REQUIRE(counts.at({0}) == 30);
    REQUIRE(counts.at({1}) == 30);
    REQUIRE(counts.at({2}) == 30);
    REQUIRE(counts.at({0, 1}) == 3);
    REQUIRE(counts.at({0, 2}) == 3);
    REQUIRE(counts.at({1, 2}) == 3);
    REQUIRE(counts.at({0, 1, 2}) == 1);
}

TEST_CASE("single-block profile yields identical pure rows", "[sampler]") {
    SamplerConfig cfg = base_config(7, 3);
    cfg.k = 2;
    cfg.profile = OverlapProfile({{{0}, 1.0}});
    cfg.b = planted_partition_b(2, 0.1);
    Rng rng(3);
    const auto z = sample_memberships(cfg, rng);
    for (int i = 0; i < 7; ++i) {
        REQUIRE(z.entries()(i, 0) == 1.0);
        REQUIRE(z.entries()(i, 1) == 0.0);
    }
}

TEST_CASE("pairwise overlap rows are 1/sqrt(2) indicators", "[sampler]") {
    SamplerConfig cfg = base_config(5, 8);
    cfg.profile = OverlapProfile({{{0, 1}, 1.0}});
    Rng rng(8);
    const auto z = sample_memberships(cfg, rng);
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(z.entries()(i, 0) == Catch::Approx(r).margin(1e-15));
        REQUIRE(z.entries()(i, 1) == Catch::Approx(r).margin(1e-15));
        REQUIRE(z.entries()(i, 2) == 0.0);
    }
}

TEST_CASE("deterministic block counts are invariant across seeds", "[sampler]") {
    Rng rng_a(1), rng_b(999);
    const auto za = sample_memberships(base_config(100, 0), rng_a);
    const auto zb = sample_memberships(base_config(100, 0), rng_b);
    REQUIRE(pattern_counts(za) == pattern_counts(zb));
    // rows themselves differ (different shuffle)
    REQUIRE((za.entries() - zb.entries()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("largest-remainder rounding breaks ties toward lower blocks", "[sampler]") {
    // n * mass = (5.5, 2.5, 2.0): one leftover goes to the first tied block
    SamplerConfig cfg = base_config(10, 0);
    cfg.profile = OverlapProfile({{{0}, 0.55}, {{1}, 0.25}, {{2}, 0.2}});
    Rng rng(2);
    const auto counts = pattern_counts(sample_memberships(cfg, rng));
    REQUIRE(counts.at({0}) == 6);
    REQUIRE(counts.at({1}) == 2);
    REQUIRE(counts.at({2}) == 2);
}

TEST_CASE("multinomial allocation hits block proportions loosely", "[sampler]") {
    SamplerConfig cfg = base_config(4000, 0, Allocation::Multinomial);
    Rng rng(11);
    const auto counts = pattern_counts(sample_memberships(cfg, rng));
    REQUIRE(std::abs(counts.at({0}) - 1200) < 150);
    REQUIRE(std::abs(counts.at({1}) - 1200) < 150);
    REQUIRE(std::abs(counts.at({2}) - 1200) < 150);
}

TEST_CASE("sampled memberships satisfy I2 when singleton masses are positive", "[sampler]") {
    for (std::uint64_t seed : {0ULL, 5ULL, 77ULL}) {
        SamplerConfig cfg = base_config(90, seed);
        const auto net = generate_network(cfg);
        const auto report =
            validate_identifiability(ModelParams(net.alpha, net.theta, net.z, cfg.b));
        REQUIRE(report.i2.pass);
    }
}

TEST_CASE("malformed profiles are rejected", "[sampler]") {
    REQUIRE_THROWS_AS(OverlapProfile({{{0}, 0.5}, {{1}, 0.6}}), InvalidProfile);
    REQUIRE_THROWS_AS(OverlapProfile({{{0}, 0.5}, {{0}, 0.5}}), InvalidProfile);
    REQUIRE_THROWS_AS(OverlapProfile({{{}, 1.0}}), InvalidProfile);
    REQUIRE_THROWS_AS(OverlapProfile({{{0, 0}, 1.0}}), InvalidProfile);
}

TEST_CASE("point-mass theta law gives all ones", "[sampler]") {
    Rng rng(1);
    const auto theta = sample_degree_params(ThetaLaw::point_mass_one(), 5, rng);
    REQUIRE(theta.theta().minCoeff() == 1.0);
    REQUIRE(theta.theta().maxCoeff() == 1.0);
}

TEST_CASE("hub law produces roughly 20 percent hubs", "[sampler]") {
    Rng rng(123);
    const auto theta = sample_degree_params(ThetaLaw::hub_default(), 5000, rng);
    int hubs = 0;
    for (int i = 0; i < theta.size(); ++i)
        if (theta.theta()(i) == 20.0) ++hubs;
    // binomial(5000, 0.2): 4 sigma is about 113
    REQUIRE(std::abs(hubs - 1000) < 120);
    REQUIRE(theta.law_mean() == Catch::Approx(4.8));
}

TEST_CASE("custom single-atom law is constant", "[sampler]") {
    Rng rng(6);
    const auto theta = sample_degree_params(ThetaLaw::custom({3.0}, {1.0}), 4, rng);
    for (int i = 0; i < 4; ++i) REQUIRE(theta.theta()(i) == 3.0);
}

TEST_CASE("alpha calibration on two pure pairs with identity B", "[sampler]") {
    Matrix z(4, 2);
    z << 1, 0,
         1, 0,
         0, 1,
         0, 1;
    const double alpha = calibrate_alpha(DegreeParams(Vector::Ones(4)), MembershipMatrix(z),
                                         ConnectivityMatrix(Matrix::Identity(2, 2)), 0.5);
    REQUIRE(alpha == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("alpha calibration is linear in the target degree", "[sampler]") {
    Rng rng(21);
    SamplerConfig cfg = base_config(50, 13);
    const auto z = sample_memberships(cfg, rng);
    const DegreeParams theta(Vector::Ones(50));
    const double a1 = calibrate_alpha(theta, z, cfg.b, 2.0);
    const double a2 = calibrate_alpha(theta, z, cfg.b, 4.0);
    REQUIRE(a2 == Catch::Approx(2.0 * a1).epsilon(1e-12));
}

TEST_CASE("all-ones connectivity gives alpha = dbar/(n-1)", "[sampler]") {
    const int n = 6;
    Matrix z(n, 2);
    z << 1, 0,
         0, 1,
         1, 0,
         0, 1,
         1, 0,
         0, 1;
    const double alpha = calibrate_alpha(DegreeParams(Vector::Ones(n)), MembershipMatrix(z),
                                         ConnectivityMatrix(Matrix::Ones(2, 2)), 2.0);
    REQUIRE(alpha == Catch::Approx(2.0 / (n - 1)).epsilon(1e-12));
}

TEST_CASE("unreachable target degree raises DegreeTooLarge", "[sampler]") {
    Matrix z(4, 2);
    z << 1, 0,
         1, 0,
         0, 1,
         0, 1;
    REQUIRE_THROWS_AS(calibrate_alpha(DegreeParams(Vector::Ones(4)), MembershipMatrix(z),
                                      ConnectivityMatrix(Matrix::Identity(2, 2)), 3.0),
                      DegreeTooLarge);
}

TEST_CASE("adjacency sampling of the zero matrix gives the empty graph", "[sampler]") {
    Rng rng(2);
    const auto a = sample_adjacency(EdgeProbabilityMatrix(Matrix::Zero(5, 5)), rng);
    REQUIRE(a.edge_count() == 0);
}

TEST_CASE("adjacency sampling of all-ones probabilities gives the complete graph", "[sampler]") {
    Matrix w = Matrix::Ones(5, 5);
    w.diagonal().setZero();
    Rng rng(2);
    const auto a = sample_adjacency(EdgeProbabilityMatrix(w), rng);
    REQUIRE(a.edge_count() == 10);
}

TEST_CASE("edge count of a homogeneous graph concentrates", "[sampler]") {
    const int n = 200;
    Matrix w = Matrix::Constant(n, n, 0.3);
    w.diagonal().setZero();
    Rng rng(99);
    const auto a = sample_adjacency(EdgeProbabilityMatrix(w), rng);
    const double pairs = n * (n - 1) / 2.0;
    const double mean = 0.3 * pairs;
    const double sd = std::sqrt(pairs * 0.3 * 0.7);
    REQUIRE(std::abs(a.edge_count() - mean) < 4.0 * sd);
}

TEST_CASE("sampled adjacency is exactly symmetric with a zero diagonal", "[sampler]") {
    const auto net = generate_network(base_config(60, 31));
    const Matrix& a = net.a.entries();
    REQUIRE((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generation is byte-identical for a fixed seed", "[sampler]") {
    const auto n1 = generate_network(base_config(40, 123));
    const auto n2 = generate_network(base_config(40, 123));
    REQUIRE(n1.z.entries() == n2.z.entries());
    REQUIRE(n1.theta.theta() == n2.theta.theta());
    REQUIRE(n1.a.entries() == n2.a.entries());
    REQUIRE(n1.alpha == n2.alpha);

    const auto n3 = generate_network(base_config(40, 124));
    REQUIRE(n1.a.entries() != n3.a.entries());
}

TEST_CASE("empirical mean degree concentrates on the target", "[sampler]") {
    for (int rep = 0; rep < 20; ++rep) {
        SamplerConfig cfg = base_config(500, derive_seed(1000, 0, static_cast<std::uint64_t>(rep)));
        cfg.target_degree = 10.0;
        const auto net = generate_network(cfg);
        const double mean_degree = 2.0 * net.a.edge_count() / 500.0;
        REQUIRE(std::abs(mean_degree - 10.0) / 10.0 <= 0.1);
    }
}
