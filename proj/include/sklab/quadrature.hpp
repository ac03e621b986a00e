#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sklab {

// Gauss-Legendre rule mapped to [0,1]; weights sum to 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return int(nodes.size()); }
};

inline QuadratureRule gauss_legendre01(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre01: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double eps = 1e-15;
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_m from the Chebyshev-like initial guess
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < eps) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x); // descending x -> ascending node
        rule.weights[i] = 0.5 * w;
        rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[m - 1 - i] = 0.5 * w;
    }
    return rule;
}

} // namespace sklab
