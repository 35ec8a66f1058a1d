#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "darkmass/model.hpp"
#include "darkmass/rng.hpp"
#include "support/quad_oracle.hpp"
#include "support/test_helpers.hpp"

using namespace darkmass;

namespace {
constexpr double kPi = std::numbers::pi;

PotentialProfile uniform_sphere_profile() {
    return build_potential_profile(DensityVector{{1.0}}, RadialGrid({0.0, 1.0}), 1.0);
}
}  // namespace

TEST_CASE("enclosed mass of the uniform sphere") {
    RadialGrid grid({0.0, 1.0});
    DensityVector rho{{1.0}};
    CHECK(enclosed_mass(rho, grid, 1.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(enclosed_mass(rho, grid, 0.0) == 0.0);
    CHECK(enclosed_mass(rho, grid, 10.0) == doctest::Approx(4.0 * kPi / 3.0));
    CHECK_THROWS_AS(enclosed_mass(rho, grid, -0.5), std::domain_error);
}

TEST_CASE("enclosed mass matches the direct shell sum") {
    RadialGrid grid({0.0, 1.0, 2.0});
    DensityVector rho{{2.0, 1.0}};
    // shells: 2*(1-0) + 1*(8-1) = 9 units of r^3, times 4 pi / 3
    CHECK(enclosed_mass(rho, grid, 2.0) == doctest::Approx(12.0 * kPi).epsilon(1e-14));

    // random radii against an independently coded shell sum
    Rng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        const double r = rng.uniform(0.0, 2.5);
        double expect = 0.0;
        for (std::size_t i = 0; i < rho.values.size(); ++i) {
            const double lo = std::min(r, grid.edges[i]);
            const double hi = std::min(r, grid.edges[i + 1]);
            expect += 4.0 * kPi / 3.0 * rho.values[i] * (hi * hi * hi - lo * lo * lo);
        }
        CHECK(enclosed_mass(rho, grid, r) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("uniform-sphere potential closed forms") {
    const auto p = uniform_sphere_profile();
    CHECK(std::abs(potential(p, 0.0) - 2.0 * kPi) < 1e-12);
    CHECK(std::abs(potential(p, 1.0) - 4.0 * kPi / 3.0) < 1e-12);
    CHECK(std::abs(potential(p, 2.0) - 2.0 * kPi / 3.0) < 1e-12);
    CHECK_THROWS_AS(potential(p, -1.0), std::domain_error);
}

TEST_CASE("potential is continuous at the bin edges") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        RadialGrid grid({0.0, 0.5, 1.3, 2.0, 3.1});
        DensityVector rho{testutil::random_monotone_density(rng, grid.bins())};
        const auto p = build_potential_profile(rho, grid, 1.0);
        for (std::size_t i = 1; i + 1 < grid.edges.size(); ++i) {
            const double r = grid.edges[i];
            const double below = p.alpha[i - 1] / r + p.beta[i - 1] + p.gamma[i - 1] * r * r;
            const double above = p.alpha[i] / r + p.beta[i] + p.gamma[i] * r * r;
            CHECK(std::abs(below - above) <= 1e-10 * p.phi_center);
        }
    }
}

TEST_CASE("potential is non-increasing") {
    Rng rng(8);
    RadialGrid grid({0.0, 0.4, 1.0, 1.7, 2.9});
    // includes non-monotone (but non-negative) densities
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> rho(grid.bins());
        for (auto& v : rho) v = rng.uniform(0.0, 2.0);
        const auto p = build_potential_profile(DensityVector{rho}, grid, 1.0);
        double prev = potential(p, 0.0);
        for (int k = 1; k <= 500; ++k) {
            const double r = 4.0 * k / 500.0;
            const double phi = potential(p, r);
            CHECK(phi <= prev + 1e-12 * p.phi_center);
            prev = phi;
        }
    }
}

TEST_CASE("finite-difference Laplacian recovers -4 pi G rho at bin midpoints") {
    Rng rng(21);
    RadialGrid grid({0.0, 0.7, 1.5, 2.0, 2.6});
    const double G = 2.3;
    DensityVector rho{testutil::random_monotone_density(rng, grid.bins(), 3.0)};
    rho.values[0] += 0.5;  // keep every bin strictly positive
    for (auto& v : rho.values) v += 0.05;
    const auto p = build_potential_profile(rho, grid, G);
    const double h = 1e-4 * grid.outer_radius();
    for (std::size_t i = 0; i < grid.bins(); ++i) {
        const double r = 0.5 * (grid.edges[i] + grid.edges[i + 1]);
        const auto phi = [&](double x) { return potential(p, x); };
        // (1/r^2) d/dr (r^2 dPhi/dr) by central differences
        const double up = (r + 0.5 * h) * (r + 0.5 * h) * (phi(r + h) - phi(r)) / h;
        const double dn = (r - 0.5 * h) * (r - 0.5 * h) * (phi(r) - phi(r - h)) / h;
        const double lap = (up - dn) / (h * r * r);
        const double target = -4.0 * kPi * G * rho.values[i];
        CHECK(lap == doctest::Approx(target).epsilon(1e-4));
    }
}

TEST_CASE("radius_of_potential inverts the uniform sphere") {
    const auto p = uniform_sphere_profile();
    CHECK(radius_of_potential(p, 4.0 * kPi / 3.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(radius_of_potential(p, 2.0 * kPi) == 0.0);
    // interior closed form: Phi = 2 pi (1 - r^2/3) -> r = 1/2
    CHECK(radius_of_potential(p, 2.0 * kPi * (1.0 - 1.0 / 12.0)) ==
          doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(radius_of_potential(p, 7.0), std::range_error);
    CHECK_THROWS_AS(radius_of_potential(p, 0.1), std::range_error);
}

TEST_CASE("radius_of_potential on a flat potential picks the smallest radius") {
    const auto p = build_potential_profile(DensityVector{{0.0, 0.0}}, RadialGrid({0.0, 1.0, 2.0}),
                                           1.0);
    CHECK(p.phi_center == 0.0);
    CHECK(radius_of_potential(p, 0.0) == 0.0);
}

TEST_CASE("radius_of_potential round-trips through potential") {
    Rng rng(31);
    RadialGrid grid({0.0, 0.5, 1.1, 2.4});
    DensityVector rho{testutil::random_monotone_density(rng, grid.bins())};
    rho.values[0] += 0.2;
    const auto p = build_potential_profile(rho, grid, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double target = rng.uniform(p.phi_outer(), p.phi_center);
        const double r = radius_of_potential(p, target);
        CHECK(potential(p, r) == doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("orbital energy") {
    const auto p = uniform_sphere_profile();
    CHECK(energy(p, PhasePoint{{0, 0, 0}, {0, 0, 0}}) == doctest::Approx(-2.0 * kPi));
    const double vesc = std::sqrt(2.0 * potential(p, 0.7));
    CHECK(energy(p, PhasePoint{{0.7, 0, 0}, {vesc, 0, 0}}) == doctest::Approx(0.0));
    CHECK(energy(p, PhasePoint{{1, 0, 0}, {1, 0, 0}}) ==
          doctest::Approx(0.5 - 4.0 * kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("df_integral rectangle arithmetic") {
    EnergyGrid egrid({-2.0, -1.0, 0.0});
    DfVector f{{3.0, 5.0}};
    CHECK(df_integral(f, egrid, -1.5) == doctest::Approx(6.5).epsilon(1e-14));
    CHECK(df_integral(f, egrid, 0.0) == 0.0);
    CHECK(df_integral(f, egrid, -3.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("df_integral is continuous, non-increasing, and matches trapezoid quadrature") {
    Rng rng(55);
    EnergyGrid egrid({-3.0, -2.2, -1.0, -0.3, 0.0});
    std::vector<double> fv(egrid.bins());
    for (int rep = 0; rep < 20; ++rep) {
        for (auto& v : fv) v = rng.uniform(0.0, 4.0);
        DfVector f{fv};

        double prev = df_integral(f, egrid, -4.0);
        for (int k = 1; k <= 200; ++k) {
            const double e = -4.0 + 4.5 * k / 200.0;
            const double val = df_integral(f, egrid, e);
            CHECK(val <= prev + 1e-12);
            // continuity in e_low: bounded slope max|f|
            CHECK(std::abs(val - prev) <= 4.0 * (4.5 / 200.0) + 1e-12);
            prev = val;
        }

        const double e_low = rng.uniform(-3.5, -0.1);
        // piecewise-constant integrand evaluated by trapezoid panels split at
        // the bin edges (where the integrand jumps)
        std::vector<double> knots{std::max(e_low, egrid.lower())};
        for (double e : egrid.edges)
            if (e > knots.front()) knots.push_back(e);
        const auto integrand = [&](double, double hint) { return fv[egrid.bin_index(hint)]; };
        const double expect = oracle::trapezoid_with_knots(integrand, knots, 1000000);
        CHECK(df_integral(f, egrid, e_low) == doctest::Approx(expect).epsilon(1e-9));
    }
}
