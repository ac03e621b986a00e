#include <doctest.h>

#include <cmath>

#include "sklab/bounds.hpp"
#include "sklab/disorder.hpp"
#include "sklab/sk_core.hpp"
#include "oracles.hpp"

using namespace sklab;

TEST_CASE("overlap basics") {
    const SpinConfiguration a{0b1010, 4}, b{0b0101, 4};
    CHECK(overlap(a, a) == 1.0);
    CHECK(overlap(a, b) == -1.0);
    CHECK(overlap(SpinConfiguration{0b1111, 4}, SpinConfiguration{0b0011, 4}) == 0.0);
    CHECK_THROWS_AS(overlap(a, SpinConfiguration{0, 3}), std::invalid_argument);
}

TEST_CASE("hamiltonian: zero couplings and single spin") {
    EffectiveCouplings zero;
    zero.n = 3;
    zero.j.assign(9, 0.0);
    CHECK(hamiltonian(zero, SpinConfiguration{0b101, 3}) == 0.0);

    DisorderRealization d;
    d.n = 1;
    d.g = {1.7};
    const auto c = effective_couplings(d);
    CHECK(hamiltonian(c, SpinConfiguration{1, 1}) == doctest::Approx(1.7).epsilon(1e-15));
}

TEST_CASE("hamiltonian matches double-sum oracle on all n=4 configurations") {
    const auto d = sample_disorder(4, SeedSpec{5, 0, StreamTag::g});
    const auto c = effective_couplings(d);
    for (std::uint32_t mask = 0; mask < 16; ++mask)
        CHECK(hamiltonian(c, SpinConfiguration{mask, 4}) ==
              doctest::Approx(oracles::hamiltonian_double_sum(d, mask)).epsilon(1e-12));
}

TEST_CASE("gibbs_enumerate at beta=0 is the uniform measure") {
    const auto d = sample_disorder(7, SeedSpec{31, 0, StreamTag::g});
    const auto g = gibbs_enumerate(effective_couplings(d), 0.0);
    CHECK(g.log_z == doctest::Approx(7.0 * std::log(2.0)).epsilon(1e-14));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            CHECK(g.corr_at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
}

TEST_CASE("single spin closed form: log_z = log 2 + beta g_11") {
    DisorderRealization d;
    d.n = 1;
    d.g = {0.83};
    const auto g = gibbs_enumerate(effective_couplings(d), 1.0);
    CHECK(g.log_z == doctest::Approx(std::log(2.0) + 0.83).epsilon(1e-14));
}

TEST_CASE("gibbs_enumerate matches the naive non-incremental oracle at n=10") {
    const auto d = sample_disorder(10, SeedSpec{77, 2, StreamTag::g});
    const double beta = beta_critical();
    const auto g = gibbs_enumerate(effective_couplings(d), beta, false);
    const double naive = oracles::log_z_naive(d, beta);
    CHECK(g.log_z == doctest::Approx(naive).epsilon(1e-10));
}

TEST_CASE("guards: n out of range, non-finite beta") {
    EffectiveCouplings c;
    c.n = 0;
    CHECK_THROWS_AS(gibbs_enumerate(c, 1.0), std::invalid_argument);
    const auto d = sample_disorder(3, SeedSpec{1, 0, StreamTag::g});
    CHECK_THROWS_AS(gibbs_enumerate(effective_couplings(d), std::nan("")),
                    std::invalid_argument);
}

TEST_CASE("overlap second moment: uniform and frozen cases") {
    GibbsSummary id;
    id.n = 5;
    id.corr.assign(25, 0.0);
    for (int i = 0; i < 5; ++i) id.corr[i * 5 + i] = 1.0;
    CHECK(overlap_second_moment_product(id, id) == doctest::Approx(0.2).epsilon(1e-15));

    GibbsSummary frozen;
    frozen.n = 5;
    frozen.corr.assign(25, 1.0);
    CHECK(overlap_second_moment_product(frozen, id) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("overlap second moment matches 4^6 pair enumeration") {
    const auto da = sample_disorder(6, SeedSpec{13, 0, StreamTag::g});
    const auto db = sample_disorder(6, SeedSpec{13, 0, StreamTag::g_prime});
    const double beta = 0.5;
    const auto ga = gibbs_enumerate(effective_couplings(da), beta);
    const auto gb = gibbs_enumerate(effective_couplings(db), beta);
    const double fast = overlap_second_moment_product(ga, gb);
    const double naive = oracles::pair_r2_naive(da, db, beta);
    CHECK(fast == doctest::Approx(naive).epsilon(1e-10));
}

TEST_CASE("log_z is convex in beta and d log_z / d beta = <H>") {
    const auto d = sample_disorder(8, SeedSpec{99, 1, StreamTag::g});
    const auto c = effective_couplings(d);
    std::vector<double> lz;
    for (double beta = 0.0; beta <= 1.5001; beta += 0.1)
        lz.push_back(gibbs_enumerate(c, beta, false).log_z);
    for (std::size_t i = 1; i + 1 < lz.size(); ++i)
        CHECK(lz[i + 1] - 2.0 * lz[i] + lz[i - 1] >= -1e-9);

    const double beta = 0.8, h = 1e-4;
    const auto g = gibbs_enumerate(c, beta);
    const double fd = (gibbs_enumerate(c, beta + h, false).log_z -
                       gibbs_enumerate(c, beta - h, false).log_z) /
                      (2.0 * h);
    CHECK(fd == doctest::Approx(g.mean_energy).epsilon(1e-5));
}

TEST_CASE("correlation matrix is symmetric, bounded, and PSD") {
    for (int n : {6, 12}) {
        const auto d = sample_disorder(n, SeedSpec{55, 0, StreamTag::g});
        const auto g = gibbs_enumerate(effective_couplings(d), beta_critical());
        for (int i = 0; i < n; ++i) {
            CHECK(g.corr_at(i, i) == 1.0);
            for (int j = 0; j < n; ++j) {
                CHECK(std::abs(g.corr_at(i, j)) <= 1.0 + 1e-12);
                CHECK(g.corr_at(i, j) == g.corr_at(j, i));
            }
        }
        CHECK(oracles::psd_within(g.corr, n, 2e-9));
    }
}
