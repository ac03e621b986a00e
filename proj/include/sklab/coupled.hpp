#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sklab/disorder.hpp"
#include "sklab/sk_core.hpp"

namespace sklab {

inline constexpr int kMaxCoupledBits = 13; // 4^n pair states

// The shared disorder g and the two independent copies g', g'' behind
// H1_t = sqrt(t) H_g + sqrt(1-t) H_g' and H2_t = sqrt(t) H_g + sqrt(1-t) H_g''.
struct CoupledDisorder {
    DisorderRealization g;
    DisorderRealization g_prime;
    DisorderRealization g_double_prime;

    int n() const { return g.n; }
};

inline CoupledDisorder sample_coupled(int n, std::uint64_t master_seed,
                                      std::uint32_t replica_index) {
    CoupledDisorder cd;
    cd.g = sample_disorder(n, SeedSpec{master_seed, replica_index, StreamTag::g});
    cd.g_prime = sample_disorder(n, SeedSpec{master_seed, replica_index, StreamTag::g_prime});
    cd.g_double_prime =
        sample_disorder(n, SeedSpec{master_seed, replica_index, StreamTag::g_double_prime});
    return cd;
}

struct InterpolationPoint {
    double beta = 1.0;
    double t = 0.0;
    double lambda = 0.0;
};

struct CoupledSummary {
    int n = 0;
    double phi_hat = 0.0; // (1/n) log sum_{sigma,rho} exp(...)
    std::vector<double> corr_sigma; // n x n, <sigma_i sigma_j>_{t,lambda}
    std::vector<double> corr_rho;   // n x n, <rho_i rho_j>_{t,lambda}
    double r2 = 0.0;       // <R(sigma,rho)^2>_{t,lambda}
    double r2_cross = 0.0; // <R(sigma^1,rho^2)^2>_{t,lambda}
};

namespace detail {

inline void check_t(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in [0,1]");
}

inline std::pair<EffectiveCouplings, EffectiveCouplings>
interpolated_couplings(const CoupledDisorder& cd, double t) {
    const double wt = std::sqrt(t);
    const double wu = std::sqrt(1.0 - t);
    EffectiveCouplings cg = effective_couplings(cd.g);
    return {blend(cg, effective_couplings(cd.g_prime), wt, wu),
            blend(cg, effective_couplings(cd.g_double_prime), wt, wu)};
}

} // namespace detail

inline std::pair<double, double> coupled_hamiltonians(const CoupledDisorder& cd, double t,
                                                      const SpinConfiguration& sigma,
                                                      const SpinConfiguration& rho) {
    detail::check_t(t);
    auto [c1, c2] = detail::interpolated_couplings(cd, t);
    return {hamiltonian(c1, sigma), hamiltonian(c2, rho)};
}

// Exact enumeration of all 4^n pairs via nested Gray codes. The inner loop
// keeps the integer overlap dot product d = n R(sigma,rho) with O(1) updates;
// the coupling term lambda beta^2 d^2 / n is recomputed from d at each state.
inline CoupledSummary coupled_enumerate(const CoupledDisorder& cd, const InterpolationPoint& p) {
    const int n = cd.n();
    if (n < 1 || n > kMaxCoupledBits)
        throw std::invalid_argument("coupled_enumerate: n out of range [1,13]");
    detail::check_t(p.t);
    if (!std::isfinite(p.beta) || !std::isfinite(p.lambda))
        throw std::invalid_argument("coupled_enumerate: non-finite parameter");

    auto [c1, c2] = detail::interpolated_couplings(cd, p.t);
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    const double lb2 = p.lambda * p.beta * p.beta / double(n);

    std::vector<int> s(n, -1), r(n, -1);
    double pair1 = 0.0, pair2_0 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            pair1 += c1.coupling(i, k) * s[i] * s[k];
            pair2_0 += c2.coupling(i, k) * r[i] * r[k];
        }
    double h1 = (c1.diag_sum + pair1) * inv_sqrt_n;
    const double h2_0 = (c2.diag_sum + pair2_0) * inv_sqrt_n; // rho = all -1
    int sigma_sum = -n;

    const std::uint64_t total = std::uint64_t(1) << n;
    double running_max = -std::numeric_limits<double>::infinity();
    double z_sum = 0.0, r2_sum = 0.0;
    std::vector<double> w_sigma(total, 0.0), w_rho(total, 0.0);

    std::uint32_t sigma_mask = 0;
    for (std::uint64_t outer = 0; outer < total; ++outer) {
        if (outer > 0) {
            const int b = std::countr_zero(outer);
            s[b] = -s[b];
            double local = 0.0;
            const double* row = c1.row(b);
            for (int k = 0; k < n; ++k) local += row[k] * s[k];
            h1 += 2.0 * s[b] * local * inv_sqrt_n;
            sigma_sum += 2 * s[b];
            sigma_mask = std::uint32_t(outer ^ (outer >> 1));
        }

        // rho restarts from all -1 each sweep (the Gray walk is unwound below)
        double h2 = h2_0;
        int d = -sigma_sum;
        double w_sigma_local = 0.0;
        std::uint32_t rho_mask = 0;
        for (std::uint64_t inner = 0; inner < total; ++inner) {
            if (inner > 0) {
                const int b = std::countr_zero(inner);
                r[b] = -r[b];
                double local = 0.0;
                const double* row = c2.row(b);
                for (int k = 0; k < n; ++k) local += row[k] * r[k];
                h2 += 2.0 * r[b] * local * inv_sqrt_n;
                d += 2 * r[b] * s[b];
                rho_mask = std::uint32_t(inner ^ (inner >> 1));
            }
            const double e = p.beta * (h1 + h2) + lb2 * double(d) * d;
            if (e > running_max) {
                const double f = (running_max == -std::numeric_limits<double>::infinity())
                                     ? 0.0
                                     : std::exp(running_max - e);
                z_sum *= f;
                r2_sum *= f;
                w_sigma_local *= f;
                for (auto& w : w_sigma) w *= f;
                for (auto& w : w_rho) w *= f;
                running_max = e;
            }
            const double w = std::exp(e - running_max);
            z_sum += w;
            const double rn = double(d) / n;
            r2_sum += w * rn * rn;
            w_sigma_local += w;
            w_rho[rho_mask] += w;
        }
        w_sigma[sigma_mask] += w_sigma_local;
        // unwind: after a full Gray sweep only the top bit is flipped
        r[n - 1] = -1;
    }

    CoupledSummary out;
    out.n = n;
    out.phi_hat = (running_max + std::log(z_sum)) / n;
    out.r2 = r2_sum / z_sum;

    // Marginal correlation matrices from the per-configuration weights.
    auto marginal_corr = [&](const std::vector<double>& w) {
        std::vector<double> corr(std::size_t(n) * n, 0.0);
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            const double wm = w[mask];
            if (wm == 0.0) continue;
            for (int i = 0; i < n; ++i) {
                const double wi = ((mask >> i) & 1u) ? wm : -wm;
                for (int k = i + 1; k < n; ++k)
                    corr[std::size_t(i) * n + k] += ((mask >> k) & 1u) ? wi : -wi;
            }
        }
        for (int i = 0; i < n; ++i) {
            corr[std::size_t(i) * n + i] = 1.0;
            for (int k = i + 1; k < n; ++k) {
                const double v = corr[std::size_t(i) * n + k] / z_sum;
                corr[std::size_t(i) * n + k] = v;
                corr[std::size_t(k) * n + i] = v;
            }
        }
        return corr;
    };
    out.corr_sigma = marginal_corr(w_sigma);
    out.corr_rho = marginal_corr(w_rho);

    // Independent replica pairs: the cross moment reduces to the marginals.
    double cross = 0.0;
    for (std::size_t m = 0; m < out.corr_sigma.size(); ++m)
        cross += out.corr_sigma[m] * out.corr_rho[m];
    out.r2_cross = cross / (double(n) * n);
    return out;
}

// <R(sigma,rho)^2>_{t,0} at cost 2*2^n: at lambda = 0 the pair measure
// factorizes into the two single-system Gibbs measures.
inline double factorized_r2(const CoupledDisorder& cd, double beta, double t) {
    detail::check_t(t);
    auto [c1, c2] = detail::interpolated_couplings(cd, t);
    const GibbsSummary a = gibbs_enumerate(c1, beta);
    const GibbsSummary b = gibbs_enumerate(c2, beta);
    return overlap_second_moment_product(a, b);
}

// Per-realization value of phi at lambda = 0 via the same factorization,
// at cost 2*2^n (no correlation matrices needed).
inline double factorized_phi0(const CoupledDisorder& cd, double beta, double t) {
    detail::check_t(t);
    auto [c1, c2] = detail::interpolated_couplings(cd, t);
    const double lz1 = gibbs_enumerate(c1, beta, false).log_z;
    const double lz2 = gibbs_enumerate(c2, beta, false).log_z;
    return (lz1 + lz2) / cd.n();
}

// Phi_N(t,lambda) = phi_N(t, lambda - t).
inline double shifted_phi(const CoupledDisorder& cd, double beta, double t, double lambda) {
    return coupled_enumerate(cd, InterpolationPoint{beta, t, lambda - t}).phi_hat;
}

} // namespace sklab
