#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sklab/bounds.hpp"
#include "sklab/coupled.hpp"
#include "sklab/disorder.hpp"
#include "sklab/quadrature.hpp"
#include "sklab/sk_core.hpp"
#include "sklab/stats.hpp"

namespace sklab {

// Monte Carlo realization of the disorder expectation E: evaluates the
// quantity on realizations with replica_index 0..k-1 and summarizes.
template <class F>
DisorderAverage disorder_mc(F&& quantity, int n, std::size_t k, std::uint64_t master_seed,
                            int threads = 1) {
    if (k < 2) throw std::invalid_argument("disorder_mc: need k >= 2");
    auto values = map_replicas(k, threads, [&](std::uint32_t r) {
        const DisorderRealization d = sample_disorder(n, SeedSpec{master_seed, r, StreamTag::g});
        return quantity(d);
    });
    require_finite(values, master_seed);
    return summarize(values, master_seed);
}

// Per-replica free energies F_N(beta); the variance field of the summary is
// the direct estimate of Var(F_N(beta)).
inline std::vector<double> free_energy_samples(int n, double beta, std::size_t k,
                                               std::uint64_t master_seed, int threads = 1) {
    auto values = map_replicas(k, threads, [&](std::uint32_t r) {
        const DisorderRealization d = sample_disorder(n, SeedSpec{master_seed, r, StreamTag::g});
        return gibbs_enumerate(effective_couplings(d), beta, false).log_z;
    });
    require_finite(values, master_seed);
    return values;
}

inline DisorderAverage variance_direct(int n, double beta, std::size_t k,
                                       std::uint64_t master_seed, int threads = 1) {
    if (k < 2) throw std::invalid_argument("variance_direct: need k >= 2");
    return summarize(free_energy_samples(n, beta, k, master_seed, threads), master_seed);
}

// Var(F_N(beta)) = beta^2 n Int_0^1 E<R^2>_{t,0} dt, with all quadrature
// nodes evaluated on shared realizations so the node covariance is carried
// by the per-realization integrals.
inline std::vector<double> identity_integral_samples(int n, double beta, std::size_t k,
                                                     const QuadratureRule& rule,
                                                     std::uint64_t master_seed, int threads = 1) {
    auto values = map_replicas(k, threads, [&](std::uint32_t r) {
        const CoupledDisorder cd = sample_coupled(n, master_seed, r);
        double acc = 0.0;
        for (int j = 0; j < rule.size(); ++j)
            acc += rule.weights[j] * factorized_r2(cd, beta, rule.nodes[j]);
        return beta * beta * n * acc;
    });
    require_finite(values, master_seed);
    return values;
}

inline DisorderAverage variance_via_identity(int n, double beta, std::size_t k,
                                             const QuadratureRule& rule,
                                             std::uint64_t master_seed, int threads = 1) {
    if (k < 2) throw std::invalid_argument("variance_via_identity: need k >= 2");
    return summarize(identity_integral_samples(n, beta, k, rule, master_seed, threads),
                     master_seed);
}

// E<R^2>_{t,0} at every grid point on common realizations (paired scan).
struct MonotonicityScan {
    std::vector<double> t_grid;
    std::vector<std::vector<double>> samples; // samples[j][r] for t_grid[j]

    std::vector<DisorderAverage> averages(std::uint64_t master_seed) const {
        std::vector<DisorderAverage> out;
        out.reserve(samples.size());
        for (const auto& v : samples) out.push_back(summarize(v, master_seed));
        return out;
    }
};

inline MonotonicityScan monotonicity_scan(int n, double beta, std::size_t k,
                                          const std::vector<double>& t_grid,
                                          std::uint64_t master_seed, int threads = 1) {
    if (k < 2) throw std::invalid_argument("monotonicity_scan: need k >= 2");
    for (std::size_t j = 1; j < t_grid.size(); ++j)
        if (t_grid[j] < t_grid[j - 1])
            throw std::invalid_argument("monotonicity_scan: t_grid must be sorted");
    const std::size_t m = t_grid.size();
    // flat map over (replica, node) pairs keeps the parallel shape simple
    auto flat = map_replicas(k * m, threads, [&](std::uint32_t idx) {
        const std::uint32_t r = idx / m;
        const std::uint32_t j = idx % m;
        const CoupledDisorder cd = sample_coupled(n, master_seed, r);
        return factorized_r2(cd, beta, t_grid[j]);
    });
    require_finite(flat, master_seed);
    MonotonicityScan scan;
    scan.t_grid = t_grid;
    scan.samples.assign(m, std::vector<double>(k));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t j = 0; j < m; ++j) scan.samples[j][r] = flat[r * m + j];
    return scan;
}

// E<exp(x n R^2)>_{0,0}: the tilt exp(x n R^2) is the coupling weight at
// lambda = x / beta^2, so the per-realization value is
// exp(n (phi(0, x/beta^2) - phi(0, 0))).
inline DisorderAverage annealed_overlap_mgf(int n, double x, std::size_t k,
                                            std::uint64_t master_seed,
                                            double beta = 0.7071067811865476, int threads = 1) {
    if (k < 2) throw std::invalid_argument("annealed_overlap_mgf: need k >= 2");
    auto values = map_replicas(k, threads, [&](std::uint32_t r) {
        const CoupledDisorder cd = sample_coupled(n, master_seed, r);
        const double phi_tilted =
            coupled_enumerate(cd, InterpolationPoint{beta, 0.0, x / (beta * beta)}).phi_hat;
        const double phi_zero = factorized_phi0(cd, beta, 0.0);
        return std::exp(n * (phi_tilted - phi_zero));
    });
    require_finite(values, master_seed);
    return summarize(values, master_seed);
}

} // namespace sklab
