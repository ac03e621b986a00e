#pragma once

#include <cmath>
#include <cstdint>

namespace sklab {

// The three independent disorder streams plus an auxiliary stream used for
// bootstrap resampling.
enum class StreamTag : std::uint32_t {
    g = 0,
    g_prime = 1,
    g_double_prime = 2,
    aux = 3,
};

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t replica_index = 0;
    StreamTag stream_tag = StreamTag::g;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

namespace detail {

// splitmix64 finalizer (Vigna / Steele-Lea-Flood).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Counter-based stream: the value at position i is a pure function of
// (key, i), so draws can be generated in any order, on any thread, with
// bit-identical results. The key is a hash of the full SeedSpec triple.
class CounterStream {
public:
    explicit CounterStream(const SeedSpec& s) {
        std::uint64_t k = detail::mix64(s.master_seed);
        k = detail::mix64(k ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(s.replica_index) + 1)));
        k = detail::mix64(k ^ (0xbf58476d1ce4e5b9ULL * (std::uint64_t(s.stream_tag) + 1)));
        key_ = k;
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return detail::mix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform on (0,1), 53-bit mantissa, never exactly 0 or 1.
    double unit(std::uint64_t counter) const {
        return (double(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller at counters (2i, 2i+1).
    double normal(std::uint64_t i) const {
        const double u1 = unit(2 * i);
        const double u2 = unit(2 * i + 1);
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

} // namespace sklab
