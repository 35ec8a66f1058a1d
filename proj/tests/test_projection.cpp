#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "darkmass/binning.hpp"
#include "darkmass/projection.hpp"
#include "darkmass/rng.hpp"
#include "darkmass/synthetic.hpp"
#include "support/quad_oracle.hpp"
#include "support/test_helpers.hpp"

using namespace darkmass;

namespace {

constexpr double kPi = std::numbers::pi;

PotentialProfile uniform_sphere_profile() {
    return build_potential_profile(DensityVector{{1.0}}, RadialGrid({0.0, 1.0}), 1.0);
}

// piecewise f(E) by direct scan, zero outside the grid; the raw-integral
// oracles use this rather than any library lookup
double f_of_energy(const std::vector<double>& fv, const EnergyGrid& egrid, double e) {
    if (e <= egrid.lower() || e > egrid.upper()) return 0.0;
    for (std::size_t j = 0; j < fv.size(); ++j)
        if (e <= egrid.edges[j + 1]) return fv[j];
    return 0.0;
}

struct RandomCase {
    RadialGrid grid;
    EnergyGrid egrid;
    DensityVector rho;
    DfVector f;
    PotentialProfile profile;
};

RandomCase make_random_case(Rng& rng) {
    const std::size_t nx = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    const std::size_t ne = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    std::vector<double> redges{0.0};
    double r = 0.0;
    for (std::size_t i = 0; i < nx; ++i) redges.push_back(r += rng.uniform(0.3, 1.2));
    RadialGrid grid(redges);
    DensityVector rho{testutil::random_monotone_density(rng, nx, 2.0)};
    rho.values[0] += 0.3;
    auto profile = build_potential_profile(rho, grid, 1.0);
    std::vector<double> eedges{-profile.phi_center * rng.uniform(0.6, 0.999)};
    for (std::size_t j = 0; j < ne; ++j)
        eedges.push_back(eedges.back() * (1.0 - (j + 1.0) / ne) - 1e-6 * j);
    eedges.back() = 0.0;
    std::sort(eedges.begin(), eedges.end());
    EnergyGrid egrid(eedges);
    std::vector<double> fv(ne);
    for (auto& v : fv) v = rng.uniform(0.1, 3.0);
    return RandomCase{grid, egrid, rho, DfVector{fv}, profile};
}

}  // namespace

TEST_CASE("inner velocity integral: exact reduction values") {
    const auto p = uniform_sphere_profile();
    EnergyGrid egrid({-2.0, -1.0, 0.0});
    DfVector f{{3.0, 5.0}};
    // exterior radius where Phi = 1.5
    const double r = 4.0 * kPi / 4.5;
    CHECK(potential(p, r) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(inner_velocity_integral(p, f, egrid, r, 1.0) ==
          doctest::Approx(10.0 * kPi).epsilon(1e-12));
    // unbound line-of-sight point
    const double v_esc = std::sqrt(2.0 * potential(p, r));
    CHECK(inner_velocity_integral(p, f, egrid, r, v_esc * (1.0 + 1e-12)) == 0.0);
    CHECK(inner_velocity_integral(p, f, egrid, r, v_esc + 0.3) == 0.0);
}

TEST_CASE("inner velocity integral equals the raw 2-d integral") {
    Rng rng(101);
    for (int rep = 0; rep < 20; ++rep) {
        const auto c = make_random_case(rng);
        const double r = rng.uniform(0.0, c.grid.outer_radius());
        const double phi = potential(c.profile, r);
        const double v3 = rng.uniform(0.0, std::sqrt(2.0 * phi) * 1.05);
        const double impl = inner_velocity_integral(c.profile, c.f, c.egrid, r, v3);

        const double vmax = std::sqrt(2.0 * phi);
        const auto raw = [&](double v1, double v2) {
            const double e = 0.5 * (v1 * v1 + v2 * v2 + v3 * v3) - phi;
            if (e > 0.0) return 0.0;
            return f_of_energy(c.f.values, c.egrid, e);
        };
        const double scale = 3.0 * (2.0 * vmax) * (2.0 * vmax) + 1.0;
        const double expect = oracle::adaptive_simpson_2d(raw, -vmax, vmax, -vmax, vmax,
                                                          1e-10 * scale, 1e-9 * scale);
        if (impl == 0.0)
            CHECK(std::abs(expect) < 1e-7 * scale);
        else
            CHECK(impl == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("project_pdf_unnorm support cuts") {
    const auto p = uniform_sphere_profile();
    RadialGrid grid({0.0, 1.0});
    EnergyGrid egrid({-2.0 * kPi, 0.0});
    DfVector f{{1.0}};
    ProjectionConfig cfg;
    // outside the truncation radius
    CHECK(project_pdf_unnorm(p, f, egrid, grid, 1.0, 0.1, cfg) == 0.0);
    CHECK(project_pdf_unnorm(p, f, egrid, grid, 1.7, 0.1, cfg) == 0.0);
    // escape cut at the innermost line-of-sight point
    const double v_esc = std::sqrt(2.0 * potential(p, 0.4));
    CHECK(project_pdf_unnorm(p, f, egrid, grid, 0.4, v_esc, cfg) == 0.0);
    CHECK(project_pdf_unnorm(p, f, egrid, grid, 0.4, 0.9 * v_esc, cfg) > 0.0);
}

TEST_CASE("project_pdf_unnorm matches adaptive line-of-sight quadrature") {
    ProjectionConfig cfg;
    // uniform sphere with constant f first
    {
        const auto p = uniform_sphere_profile();
        RadialGrid grid({0.0, 1.0});
        EnergyGrid egrid({-2.0 * kPi, 0.0});
        DfVector f{{0.7}};
        const double rp = 0.35, v3 = 1.1;
        const double impl = project_pdf_unnorm(p, f, egrid, grid, rp, v3, cfg);
        const double L = std::sqrt(1.0 - rp * rp);
        const auto integrand = [&](double x3) {
            return inner_velocity_integral(p, f, egrid, std::hypot(rp, x3), v3);
        };
        const double expect = 2.0 * oracle::adaptive_simpson(integrand, 0.0, L, 1e-10 * impl);
        CHECK(impl == doctest::Approx(expect).epsilon(1e-8));
    }
    // random models
    Rng rng(202);
    for (int rep = 0; rep < 20; ++rep) {
        const auto c = make_random_case(rng);
        const double rp = rng.uniform(0.0, c.grid.outer_radius() * 1.05);
        const double v3 = rng.uniform(0.0, std::sqrt(2.0 * c.profile.phi_center));
        const double impl = project_pdf_unnorm(c.profile, c.f, c.egrid, c.grid, rp, v3, cfg);
        if (rp >= c.grid.outer_radius()) {
            CHECK(impl == 0.0);
            continue;
        }
        const double L = std::sqrt(c.grid.outer_radius() * c.grid.outer_radius() - rp * rp);
        const auto integrand = [&](double x3) {
            return inner_velocity_integral(c.profile, c.f, c.egrid, std::hypot(rp, x3), v3);
        };
        const double scale = std::max(impl, 1e-3);
        const double expect =
            2.0 * oracle::adaptive_simpson(integrand, 0.0, L, 1e-10 * scale, 52, 8);
        if (impl == 0.0)
            CHECK(std::abs(expect) < 1e-7);
        else
            CHECK(impl == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("density-of-states weights: degenerate and sign cases") {
    RadialGrid grid({0.0, 1.0, 2.0});
    EnergyGrid egrid({-3.0, -1.0, 0.0});
    ProjectionConfig cfg;
    const auto zero = build_potential_profile(DensityVector{{0.0, 0.0}}, grid, 1.0);
    for (double w : dos_weights(zero, egrid, grid, cfg)) CHECK(w == 0.0);

    Rng rng(303);
    for (int rep = 0; rep < 5; ++rep) {
        const auto c = make_random_case(rng);
        for (double w : dos_weights(c.profile, c.egrid, c.grid, ProjectionConfig{}))
            CHECK(w >= 0.0);
    }
}

TEST_CASE("density-of-states norm matches Monte Carlo phase-space volume") {
    const auto p = uniform_sphere_profile();
    RadialGrid grid({0.0, 1.0});
    EnergyGrid egrid({-2.0 * kPi, 0.0});
    DfVector f{{1.0}};
    ProjectionConfig cfg;
    const double norm = phase_space_norm(f, dos_weights(p, egrid, grid, cfg));

    Rng rng(404);
    const long n = 1000000;
    const double vcap = std::sqrt(2.0 * p.phi_center);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double r = std::cbrt(rng.uniform());
        const double v = vcap * std::cbrt(rng.uniform());
        const double e = 0.5 * v * v - potential(p, r);
        const double val = e <= 0.0 ? 1.0 : 0.0;
        sum += val;
        sumsq += val * val;
    }
    const double vol = (4.0 * kPi / 3.0) * (4.0 * kPi / 3.0) * vcap * vcap * vcap;
    const double mean = sum / n;
    const double se = vol * std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(norm - vol * mean) < 3.0 * se);
}

TEST_CASE("normalized pdf: ratio, convolution limit, normalization") {
    RadialGrid grid({0.0, 1.0, 2.0});
    DensityVector rho{{1.0, 0.4}};
    const auto p = build_potential_profile(rho, grid, 1.0);
    EnergyGrid egrid({-p.phi_center, -0.3 * p.phi_center, 0.0});
    DfVector f{{0.9, 0.35}};
    ProjectionConfig cfg;
    const auto w = dos_weights(p, egrid, grid, cfg);
    const double norm = phase_space_norm(f, w);

    Observation obs{0.6, 0.3, 0.8, std::nullopt};
    const double nu = project_pdf(p, f, egrid, grid, obs, cfg);
    CHECK(nu == doctest::Approx(project_pdf_unnorm(p, f, egrid, grid, obs.rp(), obs.v3, cfg) /
                                norm)
                    .epsilon(1e-14));

    // vanishing measurement error recovers the plain value
    ProjectionConfig conv = cfg;
    conv.convolve_errors = true;
    Observation noisy = obs;
    noisy.sigma_v3 = 0.0;
    CHECK(project_pdf(p, f, egrid, grid, noisy, conv) == doctest::Approx(nu).epsilon(1e-14));
    noisy.sigma_v3 = 1e-9;
    CHECK(project_pdf(p, f, egrid, grid, noisy, conv) == doctest::Approx(nu).epsilon(1e-9));

    // integral of nu over the observable space is 1
    const auto nu_at = [&](double rp, double v3) {
        return project_pdf_unnorm(p, f, egrid, grid, rp, v3, cfg) / norm;
    };
    const auto inner_v3 = [&](double rp) {
        const double vmax = std::sqrt(2.0 * potential(p, rp));
        return 2.0 * oracle::adaptive_simpson([&](double v3) { return nu_at(rp, v3); }, 0.0,
                                              vmax, 1e-8, 40, 6);
    };
    const double total = oracle::adaptive_simpson(
        [&](double rp) { return 2.0 * kPi * rp * inner_v3(rp); }, 0.0, grid.outer_radius(),
        1e-6, 40, 6);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));

    // degenerate model
    DfVector fzero{{0.0, 0.0}};
    CHECK_THROWS_AS(project_pdf(p, fzero, egrid, grid, obs, cfg), std::domain_error);
}

TEST_CASE("projected pdf is symmetric under sky rotations and velocity sign") {
    Rng rng(505);
    const auto c = make_random_case(rng);
    ProjectionConfig cfg;
    const auto w = dos_weights(c.profile, c.egrid, c.grid, cfg);
    const double norm = phase_space_norm(c.f, w);
    REQUIRE(norm > 0.0);
    for (int rep = 0; rep < 25; ++rep) {
        const double rp = rng.uniform(0.0, c.grid.outer_radius() * 0.95);
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const double v3 = rng.uniform(0.0, std::sqrt(2.0 * c.profile.phi_center));
        Observation a{rp, 0.0, v3, std::nullopt};
        Observation b{rp * std::cos(angle), rp * std::sin(angle), -v3, std::nullopt};
        const double nua = project_pdf(c.profile, c.f, c.egrid, c.grid, a, cfg);
        const double nub = project_pdf(c.profile, c.f, c.egrid, c.grid, b, cfg);
        if (nua == 0.0)
            CHECK(nub == 0.0);
        else
            CHECK(nua == doctest::Approx(nub).epsilon(1e-11));
    }
}

TEST_CASE("doubling the quadrature order moves log nu by less than 1e-6") {
    const UnitSystem units = UnitSystem::astro();
    AnalyticModel model{ModelKind::Plummer, 1.0e11, 3.0, units.G};
    for (int n : {114, 255}) {
        Rng rng(9000 + n);
        const auto cat = sample_catalog(rng, model, n);
        const auto binning = bin_data(cat.observations, units);
        const auto rho = DensityVector{binning.emp.rho_emp.values};
        const auto profile = build_potential_profile(rho, binning.rgrid, units.G);
        DfVector f{std::vector<double>(binning.egrid.bins(), 1.0)};

        ProjectionConfig c16, c32;
        c32.gl_order = 32;
        const auto w16 = dos_weights(profile, binning.egrid, binning.rgrid, c16);
        const auto w32 = dos_weights(profile, binning.egrid, binning.rgrid, c32);
        const double n16 = phase_space_norm(f, w16), n32 = phase_space_norm(f, w32);
        for (const auto& obs : cat.observations) {
            const double a =
                project_pdf_unnorm(profile, f, binning.egrid, binning.rgrid, obs.rp(), obs.v3, c16);
            const double b =
                project_pdf_unnorm(profile, f, binning.egrid, binning.rgrid, obs.rp(), obs.v3, c32);
            if (a <= 0.0 || b <= 0.0) {
                CHECK(a == b);
                continue;
            }
            CHECK(std::abs((std::log(a) - std::log(n16)) - (std::log(b) - std::log(n32))) <
                  1e-6);
        }
    }
}
