#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sklab/disorder.hpp"

namespace sklab {

inline constexpr int kMaxEnumerationBits = 30; // 2^n single-system states

// Bit i set <=> sigma_i = +1.
struct SpinConfiguration {
    std::uint32_t bits = 0;
    int n = 0;

    int spin(int i) const { return (bits >> i) & 1u ? +1 : -1; }
};

inline double overlap(const SpinConfiguration& a, const SpinConfiguration& b) {
    if (a.n != b.n) throw std::invalid_argument("overlap: size mismatch");
    const int disagree = std::popcount((a.bits ^ b.bits) & ((a.n == 32 ? 0u : (1u << a.n)) - 1u));
    return double(a.n - 2 * disagree) / a.n;
}

inline double hamiltonian(const EffectiveCouplings& c, const SpinConfiguration& s) {
    if (c.n != s.n) throw std::invalid_argument("hamiltonian: size mismatch");
    double pair = 0.0;
    for (int i = 0; i < c.n; ++i)
        for (int k = i + 1; k < c.n; ++k)
            pair += c.coupling(i, k) * s.spin(i) * s.spin(k);
    return (c.diag_sum + pair) / std::sqrt(double(c.n));
}

struct GibbsSummary {
    int n = 0;
    double log_z = 0.0;      // this is F_N(beta) for the realization
    double mean_energy = 0.0;
    std::vector<double> corr; // n x n, <sigma_i sigma_j>; empty if not requested

    double corr_at(int i, int j) const { return corr[std::size_t(i) * n + j]; }
};

namespace detail {

struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    void scale(double f) {
        sum *= f;
        comp *= f;
    }
};

} // namespace detail

// Exact Gibbs summary by full enumeration over {-1,+1}^n in Gray-code order
// with O(n) incremental energy updates. log Z uses a single-pass streaming
// log-sum-exp with running-max rescaling; the correlation matrix is
// accumulated with compensated summation.
inline GibbsSummary gibbs_enumerate(const EffectiveCouplings& c, double beta,
                                    bool with_corr = true) {
    if (c.n < 1 || c.n > kMaxEnumerationBits)
        throw std::invalid_argument("gibbs_enumerate: n out of range [1,30]");
    if (!std::isfinite(beta)) throw std::invalid_argument("gibbs_enumerate: beta not finite");

    const int n = c.n;
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    std::vector<int> s(n, -1); // config at Gray index 0 is all -1
    double pair_sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) pair_sum += c.coupling(i, k) * s[i] * s[k];
    double energy = (c.diag_sum + pair_sum) * inv_sqrt_n;

    double running_max = -std::numeric_limits<double>::infinity();
    detail::Kahan z_acc;     // sum of exp(beta*E - running_max)
    detail::Kahan e_acc;     // sum of exp(...) * E
    const std::size_t ncorr = with_corr ? std::size_t(n) * n : 0;
    std::vector<detail::Kahan> corr_acc(ncorr);

    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (step > 0) {
            const int b = std::countr_zero(step);
            s[b] = -s[b];
            double local = 0.0;
            const double* row = c.row(b);
            for (int k = 0; k < n; ++k) local += row[k] * s[k];
            energy += 2.0 * s[b] * local * inv_sqrt_n;
        }
        const double e = beta * energy;
        if (e > running_max) {
            const double f = (running_max == -std::numeric_limits<double>::infinity())
                                 ? 0.0
                                 : std::exp(running_max - e);
            z_acc.scale(f);
            e_acc.scale(f);
            for (auto& a : corr_acc) a.scale(f);
            running_max = e;
        }
        const double w = std::exp(e - running_max);
        z_acc.add(w);
        e_acc.add(w * energy);
        if (with_corr) {
            for (int i = 0; i < n; ++i) {
                const double wsi = w * s[i];
                auto* row_acc = corr_acc.data() + std::size_t(i) * n;
                for (int k = i + 1; k < n; ++k) row_acc[k].add(wsi * s[k]);
            }
        }
    }

    GibbsSummary out;
    out.n = n;
    out.log_z = running_max + std::log(z_acc.sum);
    out.mean_energy = e_acc.sum / z_acc.sum;
    if (with_corr) {
        out.corr.assign(std::size_t(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            out.corr[std::size_t(i) * n + i] = 1.0;
            for (int k = i + 1; k < n; ++k) {
                const double v = corr_acc[std::size_t(i) * n + k].sum / z_acc.sum;
                out.corr[std::size_t(i) * n + k] = v;
                out.corr[std::size_t(k) * n + i] = v;
            }
        }
    }
    return out;
}

// <R(sigma,rho)^2> for sigma, rho drawn independently from the two Gibbs
// measures: (1/n^2) sum_ij <s_i s_j>_a <s_i s_j>_b.
inline double overlap_second_moment_product(const GibbsSummary& a, const GibbsSummary& b) {
    if (a.n != b.n) throw std::invalid_argument("overlap_second_moment_product: size mismatch");
    if (a.corr.empty() || b.corr.empty())
        throw std::invalid_argument("overlap_second_moment_product: correlations not computed");
    double acc = 0.0;
    for (std::size_t m = 0; m < a.corr.size(); ++m) acc += a.corr[m] * b.corr[m];
    return acc / (double(a.n) * a.n);
}

} // namespace sklab
