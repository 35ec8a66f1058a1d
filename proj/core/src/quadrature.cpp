#include "darkmass/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace darkmass::math {

namespace {

GaussLegendre make_gauss_legendre(int n) {
    GaussLegendre rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.x[i - 1] = -z;
        rule.x[n - i] = z;
        rule.w[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - i] = rule.w[i - 1];
    }
    return rule;
}

// Physicists' Hermite polynomial H_n(x) by recurrence.
double hermite(int n, double x) {
    double h0 = 1.0, h1 = 2.0 * x;
    if (n == 0) return h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// Roots of H_n found level by level: the roots of H_{k} interlace those of
// H_{k-1}, so bracketing intervals come for free and bisection is enough.
std::vector<double> hermite_roots(int n) {
    std::vector<double> roots{};  // H_0 has none
    for (int k = 1; k <= n; ++k) {
        const double bound = std::sqrt(2.0 * k + 1.0);
        std::vector<double> guards;
        guards.push_back(-bound);
        guards.insert(guards.end(), roots.begin(), roots.end());
        guards.push_back(bound);
        std::vector<double> next(k);
        for (int i = 0; i < k; ++i) {
            double lo = guards[i], hi = guards[i + 1];
            double flo = hermite(k, lo);
            for (int it = 0; it < 120; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double fm = hermite(k, mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            next[i] = 0.5 * (lo + hi);
        }
        roots = std::move(next);
    }
    return roots;
}

GaussHermite make_gauss_hermite(int n) {
    GaussHermite rule;
    rule.x = hermite_roots(n);
    rule.w.resize(n);
    // w_i = 2^{n-1} n! sqrt(pi) / (n^2 H_{n-1}(x_i)^2)
    double lead = std::sqrt(std::numbers::pi) * std::pow(2.0, n - 1) * std::tgamma(n + 1.0) /
                  (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double h = hermite(n - 1, rule.x[i]);
        rule.w[i] = lead / (h * h);
    }
    return rule;
}

template <class Rule, class Maker>
const Rule& cached_rule(int order, Maker make, const char* what) {
    if (order < 2) throw std::invalid_argument(std::string(what) + ": order must be >= 2");
    if (order > 128) throw std::invalid_argument(std::string(what) + ": order too large");
    static std::map<int, Rule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make(order)).first;
    return it->second;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
    return cached_rule<GaussLegendre>(order, make_gauss_legendre, "gauss_legendre");
}

const GaussHermite& gauss_hermite(int order) {
    return cached_rule<GaussHermite>(order, make_gauss_hermite, "gauss_hermite");
}

}  // namespace darkmass::math
