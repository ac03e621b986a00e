#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sklab {

struct BoundReport {
    double value_estimated = 0.0;
    double value_bound = 0.0;
    double stderr_ = 0.0;

    bool satisfied() const { return value_estimated <= value_bound + 3.0 * stderr_; }
};

inline double beta_critical() { return 1.0 / std::sqrt(2.0); }

// E<R^2>_{t,0} <= (2 / (n (1 - 2 beta^2 t))) log(2 / (1 - 2 beta^2 t)),
// valid for 2 beta^2 t < 1.
inline double lemma_bound(int n, double beta, double t) {
    const double u = 1.0 - 2.0 * beta * beta * t;
    if (u <= 0.0) throw std::domain_error("lemma_bound: requires 2 beta^2 t < 1");
    return 2.0 / (n * u) * std::log(2.0 / u);
}

// E exp(x (sum of n Rademacher)^2 / n), exact via the binomial law.
// Log-domain evaluation keeps this finite up to n ~ 1e4.
inline double rademacher_mgf_exact(int n, double x) {
    if (n < 1) throw std::invalid_argument("rademacher_mgf_exact: n must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("rademacher_mgf_exact: x not finite");
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double log_binom =
            std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double s = double(n - 2 * k);
        terms[k] = log_binom - n * std::log(2.0) + x * s * s / n;
        max_term = std::max(max_term, terms[k]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return std::exp(max_term + std::log(acc));
}

// Gaussian-tail envelope 1/sqrt(1-2x) dominating the Rademacher MGF on [0,1/2).
inline double mgf_bound(double x) {
    if (!(x >= 0.0 && x < 0.5)) throw std::domain_error("mgf_bound: requires x in [0, 1/2)");
    return 1.0 / std::sqrt(1.0 - 2.0 * x);
}

// Exact value of the integral of lemma_bound over [0, 1/(2 beta^2) - delta]:
// (1 / (2 n beta^2)) ((log(beta^2 delta))^2 - (log 2)^2).
inline double integral_split_closed_form(int n, double beta, double delta) {
    const double b2 = beta * beta;
    // the upper comparison carries an ulp allowance so beta = beta_c passes
    if (!(delta > 0.0) || !(delta < 1.0 / (2.0 * b2)) || 1.0 / (2.0 * b2) > 1.0 + 1e-12)
        throw std::domain_error("integral_split_closed_form: requires 0 < delta < 1/(2 beta^2) <= 1");
    const double la = std::log(b2 * delta);
    const double l2 = std::log(2.0);
    return (la * la - l2 * l2) / (2.0 * n * b2);
}

inline double theorem_envelope_critical(int n, double C) {
    const double l = std::log(double(n));
    return C * (l * l + 1.0);
}

inline double theorem_envelope_near(int n, double alpha, double C) {
    const double l = std::log(double(n));
    return C * (l * l + std::pow(double(n), 1.0 - alpha));
}

// beta_N = sqrt(beta_c^2 + d n^-alpha), approaching criticality from below
// in temperature (above in beta).
inline double near_critical_beta(int n, double alpha, double d) {
    if (!(alpha > 0.0) || !(d > 0.0))
        throw std::invalid_argument("near_critical_beta: requires alpha > 0, d > 0");
    return std::sqrt(0.5 + d * std::pow(double(n), -alpha));
}

// Head of the variance split after the loosening steps of the proof:
// drop -(log 2)^2, then (log(beta^2 delta))^2 <= 2 (log delta)^2 + 2 (log beta^2)^2,
// doubled once more so the beta-dependent constant enters as 4 (log beta^2)^2.
inline double split_head_loosened(double beta, double delta) {
    const double ld = std::log(delta);
    const double lb2 = std::log(beta * beta);
    return ld * ld + 4.0 * lb2 * lb2;
}

// Tail contribution beta^2 n (1 - 1/(2 beta^2) + delta); |R| <= 1 on the
// remaining t-interval.
inline double split_tail(int n, double beta, double delta) {
    const double b2 = beta * beta;
    return b2 * n * (1.0 - 1.0 / (2.0 * b2) + delta);
}

// Full reconstructed variance bound at the critical temperature with
// delta = 1/n: (log n)^2 + 4 (log 2)^2 + 1/2.
inline double critical_variance_bound(int n) {
    const double bc = beta_critical();
    const double delta = 1.0 / n;
    return split_head_loosened(bc, delta) + split_tail(n, bc, delta);
}

} // namespace sklab
