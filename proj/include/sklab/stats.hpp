#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sklab/rng.hpp"

namespace sklab {

struct DisorderAverage {
    double mean = 0.0;
    double variance = 0.0;        // unbiased sample variance
    double stderr_mean = 0.0;     // sqrt(variance / k)
    double stderr_variance = 0.0; // bootstrap
    std::size_t k = 0;
    std::uint64_t seed = 0;
};

inline constexpr int kBootstrapResamples = 1000;

inline double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

inline double sample_variance(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / double(v.size() - 1);
}

// Bootstrap standard error of the unbiased sample variance, seeded from the
// master seed so reruns are identical.
inline double bootstrap_stderr_variance(const std::vector<double>& v, std::uint64_t master_seed,
                                        int resamples = kBootstrapResamples) {
    const std::size_t k = v.size();
    CounterStream stream(SeedSpec{master_seed, 0, StreamTag::aux});
    std::uint64_t ctr = 0;
    double acc = 0.0, acc2 = 0.0;
    std::vector<double> draw(k);
    for (int b = 0; b < resamples; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            draw[i] = v[stream.bits(ctr++) % k];
            m += draw[i];
        }
        m /= double(k);
        const double var = sample_variance(draw, m);
        acc += var;
        acc2 += var * var;
    }
    const double bm = acc / resamples;
    const double bv = acc2 / resamples - bm * bm;
    return bv > 0.0 ? std::sqrt(bv) : 0.0;
}

inline DisorderAverage summarize(const std::vector<double>& v, std::uint64_t master_seed) {
    if (v.size() < 2) throw std::invalid_argument("summarize: need k >= 2 samples");
    DisorderAverage a;
    a.k = v.size();
    a.seed = master_seed;
    a.mean = sample_mean(v);
    a.variance = sample_variance(v, a.mean);
    a.stderr_mean = std::sqrt(a.variance / double(a.k));
    a.stderr_variance = bootstrap_stderr_variance(v, master_seed);
    return a;
}

// Per-replica paired differences b - a summarized on shared realizations.
inline DisorderAverage paired_difference(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         std::uint64_t master_seed) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_difference: size mismatch");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
    return summarize(d, master_seed);
}

// Combined standard error for independent estimates.
inline double combined_stderr(double a, double b) { return std::sqrt(a * a + b * b); }

// Evaluates f(replica_index) for replica_index in [0,k). Each value depends
// only on its index, so the result vector is identical for any thread count.
template <class F>
std::vector<double> map_replicas(std::size_t k, int threads, F&& f) {
    std::vector<double> out(k);
    if (threads <= 1) {
        for (std::size_t r = 0; r < k; ++r) out[r] = f(std::uint32_t(r));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < k; r = next.fetch_add(1))
                    out[r] = f(std::uint32_t(r));
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

inline void require_finite(const std::vector<double>& v, std::uint64_t master_seed) {
    for (std::size_t r = 0; r < v.size(); ++r)
        if (!std::isfinite(v[r])) {
            std::ostringstream msg;
            msg << "non-finite per-realization value at master_seed=" << master_seed
                << " replica_index=" << r;
            throw std::runtime_error(msg.str());
        }
}

} // namespace sklab
