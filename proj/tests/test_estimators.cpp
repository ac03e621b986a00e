#include <doctest.h>

#include <cmath>

#include "sklab/bounds.hpp"
#include "sklab/estimators.hpp"
#include "oracles.hpp"

using namespace sklab;

TEST_CASE("disorder_mc: constant quantity") {
    const auto avg = disorder_mc([](const DisorderRealization&) { return 3.25; }, 4, 50, 1);
    CHECK(avg.mean == 3.25);
    CHECK(avg.variance == 0.0);
    CHECK_THROWS_AS(disorder_mc([](const DisorderRealization&) { return 0.0; }, 4, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("disorder_mc: F_N at beta=0 is n log 2 with zero variance") {
    const auto avg = disorder_mc(
        [](const DisorderRealization& d) {
            return gibbs_enumerate(effective_couplings(d), 0.0, false).log_z;
        },
        6, 20, 2);
    CHECK(avg.mean == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(avg.variance == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("disorder_mc: Var H_N(sigma_0) = n") {
    const int n = 8;
    const SpinConfiguration sigma0{0b10110101, n};
    const auto avg = disorder_mc(
        [&](const DisorderRealization& d) {
            return hamiltonian(effective_couplings(d), sigma0);
        },
        n, 10000, 3);
    CHECK(std::abs(avg.mean) < 4.0 * avg.stderr_mean);
    CHECK(avg.variance == doctest::Approx(double(n)).epsilon(0.10));
}

TEST_CASE("disorder_mc aborts on non-finite values with seed provenance") {
    CHECK_THROWS_WITH_AS(
        disorder_mc([](const DisorderRealization&) { return std::nan(""); }, 4, 4, 77),
        doctest::Contains("master_seed=77"), std::runtime_error);
}

TEST_CASE("thread-count invariance of disorder_mc") {
    auto f = [](const DisorderRealization& d) {
        return gibbs_enumerate(effective_couplings(d), 0.6, false).log_z;
    };
    const auto a = disorder_mc(f, 6, 64, 5, 1);
    const auto b = disorder_mc(f, 6, 64, 5, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.stderr_variance == b.stderr_variance);
}

TEST_CASE("variance_direct: beta=0 and single-spin closed form") {
    const auto zero = variance_direct(4, 0.0, 100, 11);
    CHECK(zero.variance == doctest::Approx(0.0).epsilon(1e-20));

    // F_1 = log 2 + beta g_11, so Var(F_1) = beta^2
    const double beta = 0.9;
    const auto one = variance_direct(1, beta, 10000, 12);
    CHECK(one.variance == doctest::Approx(beta * beta).epsilon(0.10));
}

TEST_CASE("variance_via_identity: beta -> 0 limit is beta^2") {
    const double beta = 1e-6;
    const auto rule = gauss_legendre01(4);
    const auto avg = variance_via_identity(5, beta, 16, rule, 13);
    // integrand is identically 1/n, so the value is beta^2 n (1/n) = beta^2
    CHECK(std::abs(avg.mean - beta * beta) < 1e-9);
}

TEST_CASE("identity vs direct at high temperature, small scale") {
    const int n = 6;
    const double beta = 0.3;
    const std::size_t k = 400;
    const auto rule = gauss_legendre01(8);
    const auto direct = variance_direct(n, beta, k, 21, 4);
    const auto identity = variance_via_identity(n, beta, k, rule, 21, 4);
    const double window =
        3.0 * combined_stderr(direct.stderr_variance, identity.stderr_mean);
    CHECK(std::abs(direct.variance - identity.mean) <= window);
}

TEST_CASE("monotonicity_scan: beta=0 gives exactly 1/n everywhere") {
    const auto scan = monotonicity_scan(8, 0.0, 8, {0.0, 0.5, 1.0}, 31);
    for (const auto& node : scan.samples)
        for (double v : node) CHECK(v == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("monotonicity_scan t=1 equals the single-disorder two-replica moment") {
    const int n = 6;
    const double beta = beta_critical();
    const std::size_t k = 200;
    const auto scan = monotonicity_scan(n, beta, k, {1.0}, 32, 4);
    auto same = map_replicas(k, 4, [&](std::uint32_t r) {
        const auto d = sample_disorder(n, SeedSpec{32, r, StreamTag::g});
        const auto g = gibbs_enumerate(effective_couplings(d), beta);
        return overlap_second_moment_product(g, g);
    });
    // identical realizations: the two computations agree per replica
    for (std::size_t r = 0; r < k; ++r)
        CHECK(scan.samples[0][r] == doctest::Approx(same[r]).epsilon(1e-12));
}

TEST_CASE("bootstrap stderr of the variance shrinks like 1/sqrt(k)") {
    const int n = 4;
    const double beta = 0.5;
    const auto small = variance_direct(n, beta, 500, 41, 4);
    const auto large = variance_direct(n, beta, 2000, 41, 4);
    const double ratio = small.stderr_variance / large.stderr_variance;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.30));
}

TEST_CASE("annealed_overlap_mgf: trivial tilts") {
    const auto one = annealed_overlap_mgf(4, 0.0, 8, 51);
    CHECK(one.mean == doctest::Approx(1.0).epsilon(1e-10));

    // n=1: R^2 = 1 identically, so the tilt is exp(x) for every realization
    const auto e = annealed_overlap_mgf(1, 0.4, 8, 52);
    CHECK(e.mean == doctest::Approx(std::exp(0.4)).epsilon(1e-10));
    CHECK(e.variance == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("annealed_overlap_mgf approaches the Rademacher value") {
    const int n = 5;
    const double x = 0.3;
    const auto avg = annealed_overlap_mgf(n, x, 800, 53, 0.7071067811865476, 4);
    const double exact = rademacher_mgf_exact(n, x);
    CHECK(std::abs(avg.mean - exact) <= 3.0 * avg.stderr_mean);
}
