#pragma once

#include <cstdint>
#include <vector>

#include "detproj/core.hpp"

namespace detproj::quad {

/// Quadrature rule on the reference d-simplex, stored in barycentric
/// coordinates (d+1 entries per point). Weights sum to 1, so integrating a
/// function over a physical simplex tau is
///     |tau| * sum_q w_q f(x_q),   x_q = sum_j lambda_{q,j} v_j.
struct SimplexRule {
    int dim = 1;
    int degree = 1;
    std::vector<std::array<double, 4>> barycentric;  // unused entries are 0
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the Legendre polynomial (machine accuracy up to n ~ 60).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    require(n >= 1, "gauss_legendre: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace detail {

/// Enumerates all beta in N_0^parts with sum(beta) = total.
inline void compositions(int total, int parts, std::vector<std::array<int, 4>>& out) {
    std::array<int, 4> beta{0, 0, 0, 0};
    // odometer over the first parts-1 entries; last entry is the remainder
    auto emit = [&](auto&& self, int pos, int left) -> void {
        if (pos == parts - 1) {
            beta[pos] = left;
            out.push_back(beta);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            beta[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    emit(emit, 0, total);
}

inline double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace detail

/// Grundmann-Moller rule of index s on the d-simplex; exact for polynomials
/// of degree 2s+1. Weights alternate in sign but stay O(1) for the indices
/// used here (degree <= 9).
inline SimplexRule grundmann_moller(int dim, int index) {
    require(dim >= 1 && dim <= 3, "grundmann_moller: dim must be 1..3");
    require(index >= 0, "grundmann_moller: index must be >= 0");
    const int s = index;
    const int d = dim;
    SimplexRule rule;
    rule.dim = d;
    rule.degree = 2 * s + 1;
    const double dfact = detail::factorial(d);
    std::vector<std::array<int, 4>> betas;
    for (int i = 0; i <= s; ++i) {
        const double denom = 2 * s + d + 1 - 2 * i;
        double w = std::pow(denom, 2 * s + 1) /
                   (std::pow(4.0, s) * detail::factorial(i) * detail::factorial(2 * s + d + 1 - i));
        if (i % 2 == 1) w = -w;
        // normalize so the weights sum to 1 over the reference simplex
        w *= dfact;
        betas.clear();
        detail::compositions(s - i, d + 1, betas);
        for (const auto& beta : betas) {
            std::array<double, 4> lam{0, 0, 0, 0};
            for (int j = 0; j <= d; ++j) lam[j] = (2.0 * beta[j] + 1.0) / denom;
            rule.barycentric.push_back(lam);
            rule.weights.push_back(w);
        }
    }
    return rule;
}

/// Rule on the d-simplex exact to at least `degree`. dim 1 uses Gauss-Legendre
/// (positive weights), dim 2/3 use Grundmann-Moller.
inline SimplexRule simplex_rule(int dim, int degree) {
    require(degree >= 1, "simplex_rule: degree must be >= 1");
    if (dim == 1) {
        int n = degree / 2 + 1;  // n-point Gauss is exact to degree 2n-1
        std::vector<double> x, w;
        gauss_legendre(n, x, w);
        SimplexRule rule;
        rule.dim = 1;
        rule.degree = 2 * n - 1;
        for (int i = 0; i < n; ++i) {
            double t = 0.5 * (x[i] + 1.0);     // map to [0,1]
            rule.barycentric.push_back({1.0 - t, t, 0, 0});
            rule.weights.push_back(0.5 * w[i]);
        }
        return rule;
    }
    int s = (degree % 2 == 0) ? degree / 2 : (degree - 1) / 2;  // 2s+1 >= degree
    return grundmann_moller(dim, s);
}

}  // namespace detproj::quad
