#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sklab/disorder.hpp"
#include "sklab/sk_core.hpp"
#include "oracles.hpp"

using namespace sklab;

TEST_CASE("sample_disorder is deterministic and rejects n=0") {
    const SeedSpec s{42, 3, StreamTag::g};
    const auto a = sample_disorder(2, s);
    const auto b = sample_disorder(2, s);
    CHECK(a.g == b.g);
    CHECK_THROWS_AS(sample_disorder(0, s), std::invalid_argument);
}

TEST_CASE("distinct stream tags give distinct matrices") {
    const auto a = sample_disorder(2, SeedSpec{7, 0, StreamTag::g});
    const auto b = sample_disorder(2, SeedSpec{7, 0, StreamTag::g_prime});
    CHECK(a.g != b.g);
}

TEST_CASE("g_11 marginal obeys the law of large numbers") {
    // 1e5 replicas of the (0,0) entry of the n=64 stream
    const std::size_t k = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        CounterStream stream(SeedSpec{2024, std::uint32_t(r), StreamTag::g});
        const double g11 = stream.normal(0);
        sum += g11;
        sum2 += g11 * g11;
    }
    const double mean = sum / k;
    const double var = sum2 / k - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(k)));
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("stream tags are pairwise uncorrelated") {
    const std::size_t k = 20000;
    const StreamTag tags[3] = {StreamTag::g, StreamTag::g_prime, StreamTag::g_double_prime};
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t r = 0; r < k; ++r) {
                const double x = CounterStream(SeedSpec{9, std::uint32_t(r), tags[a]}).normal(0);
                const double y = CounterStream(SeedSpec{9, std::uint32_t(r), tags[b]}).normal(0);
                sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
            }
            const double cov = sxy / k - (sx / k) * (sy / k);
            const double vx = sxx / k - (sx / k) * (sx / k);
            const double vy = syy / k - (sy / k) * (sy / k);
            CHECK(std::abs(cov / std::sqrt(vx * vy)) < 4.0 / std::sqrt(double(k)));
        }
}

TEST_CASE("effective couplings: trivial matrices") {
    DisorderRealization d;
    d.n = 2;
    d.g = {0, 0, 0, 0};
    auto c = effective_couplings(d);
    CHECK(c.coupling(0, 1) == 0.0);
    CHECK(c.diag_sum == 0.0);

    d.g = {1, 0, 0, 1}; // identity
    c = effective_couplings(d);
    CHECK(c.coupling(0, 1) == 0.0);
    CHECK(c.diag_sum == 2.0);
}

TEST_CASE("regrouped Hamiltonian equals the direct double sum") {
    for (int n : {5, 10}) {
        const auto d = sample_disorder(n, SeedSpec{11, 0, StreamTag::g});
        const auto c = effective_couplings(d);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            const double direct = oracles::hamiltonian_double_sum(d, mask);
            const double regrouped = hamiltonian(c, SpinConfiguration{mask, n});
            CHECK(regrouped == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("binary dump/restore round-trips a realization") {
    const auto d = sample_disorder(6, SeedSpec{123, 4, StreamTag::g_prime});
    std::stringstream ss;
    save_disorder(d, ss);
    const auto back = load_disorder(ss);
    CHECK(back.n == d.n);
    CHECK(back.seed == d.seed);
    CHECK(back.g == d.g);
}
