#pragma once

#include <vector>

namespace darkmass::math {

/// Nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x, w;
};

/// Nodes and weights for integrals of exp(-x^2) f(x) over the real line.
struct GaussHermite {
    std::vector<double> x, w;
};

/// Cached rule of the given order (>= 2); thread-safe.
const GaussLegendre& gauss_legendre(int order);
const GaussHermite& gauss_hermite(int order);

/// Fixed-order quadrature of f over [a, b].
template <class F>
double gl_integrate(const GaussLegendre& rule, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(mid + half * rule.x[i]);
    return half * sum;
}

}  // namespace darkmass::math
