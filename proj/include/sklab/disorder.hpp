#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sklab/rng.hpp"

namespace sklab {

// One quenched sample of the n x n Gaussian coupling matrix. No symmetry is
// imposed: g(i,j) and g(j,i) are independent draws; the diagonal is kept.
struct DisorderRealization {
    int n = 0;
    std::vector<double> g; // row-major, n*n entries
    SeedSpec seed;

    double at(int i, int j) const { return g[std::size_t(i) * n + j]; }
};

// Couplings regrouped for the enumeration kernels: the pair term uses
// J_ij = g_ij + g_ji (stored as a full symmetric matrix with zero diagonal
// for O(n) row access), the diagonal contributes the constant sum(g_ii).
struct EffectiveCouplings {
    int n = 0;
    std::vector<double> j; // row-major symmetric, zero diagonal
    double diag_sum = 0.0;

    double coupling(int i, int k) const { return j[std::size_t(i) * n + k]; }
    const double* row(int i) const { return j.data() + std::size_t(i) * n; }
};

inline DisorderRealization sample_disorder(int n, const SeedSpec& seed) {
    if (n < 1) throw std::invalid_argument("sample_disorder: n must be >= 1");
    DisorderRealization d;
    d.n = n;
    d.seed = seed;
    d.g.resize(std::size_t(n) * n);
    CounterStream stream(seed);
    for (std::size_t m = 0; m < d.g.size(); ++m) d.g[m] = stream.normal(m);
    return d;
}

inline EffectiveCouplings effective_couplings(const DisorderRealization& d) {
    EffectiveCouplings c;
    c.n = d.n;
    c.j.assign(std::size_t(d.n) * d.n, 0.0);
    for (int i = 0; i < d.n; ++i) {
        c.diag_sum += d.at(i, i);
        for (int k = i + 1; k < d.n; ++k) {
            const double jik = d.at(i, k) + d.at(k, i);
            c.j[std::size_t(i) * d.n + k] = jik;
            c.j[std::size_t(k) * d.n + i] = jik;
        }
    }
    return c;
}

// Linear combination wa*a + wb*b of two coupling sets (the Hamiltonian is
// linear in the disorder, so interpolated systems reuse the same kernels).
inline EffectiveCouplings blend(const EffectiveCouplings& a, const EffectiveCouplings& b,
                                double wa, double wb) {
    if (a.n != b.n) throw std::invalid_argument("blend: size mismatch");
    EffectiveCouplings c;
    c.n = a.n;
    c.diag_sum = wa * a.diag_sum + wb * b.diag_sum;
    c.j.resize(a.j.size());
    for (std::size_t m = 0; m < a.j.size(); ++m) c.j[m] = wa * a.j[m] + wb * b.j[m];
    return c;
}

// Binary dump/restore for failure reproduction.
// Layout: magic "SKDR", u32 n, u64 master_seed, u32 replica_index,
// u32 stream_tag, then n*n little-endian doubles.
inline void save_disorder(const DisorderRealization& d, std::ostream& os) {
    os.write("SKDR", 4);
    auto put = [&os](const void* p, std::size_t len) {
        os.write(static_cast<const char*>(p), std::streamsize(len));
    };
    std::uint32_t n = std::uint32_t(d.n);
    std::uint32_t replica = d.seed.replica_index;
    std::uint32_t tag = std::uint32_t(d.seed.stream_tag);
    put(&n, 4);
    put(&d.seed.master_seed, 8);
    put(&replica, 4);
    put(&tag, 4);
    put(d.g.data(), d.g.size() * sizeof(double));
}

inline void save_disorder(const DisorderRealization& d, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_disorder: cannot open " + path);
    save_disorder(d, os);
}

inline DisorderRealization load_disorder(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SKDR", 4) != 0)
        throw std::runtime_error("load_disorder: bad magic");
    std::uint32_t n = 0, replica = 0, tag = 0;
    std::uint64_t master = 0;
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&master), 8);
    is.read(reinterpret_cast<char*>(&replica), 4);
    is.read(reinterpret_cast<char*>(&tag), 4);
    DisorderRealization d;
    d.n = int(n);
    d.seed = SeedSpec{master, replica, StreamTag(tag)};
    d.g.resize(std::size_t(n) * n);
    is.read(reinterpret_cast<char*>(d.g.data()),
            std::streamsize(d.g.size() * sizeof(double)));
    if (!is) throw std::runtime_error("load_disorder: truncated payload");
    return d;
}

inline DisorderRealization load_disorder(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_disorder: cannot open " + path);
    return load_disorder(is);
}

} // namespace sklab
