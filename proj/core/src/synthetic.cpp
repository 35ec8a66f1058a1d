#include "darkmass/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace darkmass {

namespace {

constexpr double kPi = std::numbers::pi;

void require_valid(const AnalyticModel& m) {
    if (!(m.total_mass > 0.0) || !(m.scale > 0.0) || !(m.G > 0.0))
        throw std::invalid_argument("AnalyticModel: mass, scale and G must be positive");
}

double plummer_df_prefactor(const AnalyticModel& m) {
    return 24.0 * std::numbers::sqrt2 / (7.0 * kPi * kPi * kPi) * m.scale * m.scale /
           (std::pow(m.G, 5) * std::pow(m.total_mass, 5));
}

}  // namespace

double model_density(const AnalyticModel& m, double r) {
    require_valid(m);
    if (r < 0.0) throw std::domain_error("model_density: negative radius");
    if (m.kind == ModelKind::UniformSphere) {
        const double R = m.scale;
        return r <= R ? 3.0 * m.total_mass / (4.0 * kPi * R * R * R) : 0.0;
    }
    const double a = m.scale;
    const double q = 1.0 + r * r / (a * a);
    return 3.0 * m.total_mass / (4.0 * kPi * a * a * a) * std::pow(q, -2.5);
}

double model_potential(const AnalyticModel& m, double r) {
    require_valid(m);
    if (r < 0.0) throw std::domain_error("model_potential: negative radius");
    if (m.kind == ModelKind::UniformSphere) {
        const double R = m.scale;
        if (r >= R) return m.G * m.total_mass / r;
        return m.G * m.total_mass * (3.0 * R * R - r * r) / (2.0 * R * R * R);
    }
    return m.G * m.total_mass / std::sqrt(r * r + m.scale * m.scale);
}

double model_enclosed_mass(const AnalyticModel& m, double r) {
    require_valid(m);
    if (r < 0.0) throw std::domain_error("model_enclosed_mass: negative radius");
    if (m.kind == ModelKind::UniformSphere) {
        const double x = std::min(r / m.scale, 1.0);
        return m.total_mass * x * x * x;
    }
    const double r2 = r * r, a2 = m.scale * m.scale;
    return m.total_mass * r2 * r / std::pow(r2 + a2, 1.5);
}

double plummer_df_pdf(const AnalyticModel& m, double e) {
    require_valid(m);
    if (m.kind != ModelKind::Plummer)
        throw std::invalid_argument("plummer_df_pdf: model is not Plummer");
    const double eps = -e;  // binding energy, positive for bound orbits
    if (eps <= 0.0 || eps > model_potential(m, 0.0)) return 0.0;
    return plummer_df_prefactor(m) * std::pow(eps, 3.5);
}

double sample_speed(Rng& rng, const AnalyticModel& m, double r) {
    if (m.kind != ModelKind::Plummer)
        throw std::invalid_argument("sample_speed: implemented for the Plummer model only");
    const double phi = model_potential(m, r);
    const double v_esc = std::sqrt(2.0 * phi);
    // p(v) ~ v^2 (phi - v^2/2)^{7/2}; the mode sits at v^2 = 4 phi / 9
    const double p_max = (4.0 * phi / 9.0) * std::pow(7.0 * phi / 9.0, 3.5);
    for (;;) {
        const double v = rng.uniform(0.0, v_esc);
        const double p = v * v * std::pow(std::max(0.0, phi - 0.5 * v * v), 3.5);
        if (rng.uniform() * p_max <= p) return v;
    }
}

SyntheticCatalog sample_catalog(Rng& rng, const AnalyticModel& m, int n,
                                std::optional<double> sigma_v3) {
    require_valid(m);
    if (n < 1) throw std::invalid_argument("sample_catalog: need n >= 1");
    if (m.kind != ModelKind::Plummer)
        throw std::invalid_argument(
            "sample_catalog: implemented for the Plummer model only (the uniform sphere has no "
            "closed-form isotropic df here)");
    if (sigma_v3 && *sigma_v3 < 0.0)
        throw std::invalid_argument("sample_catalog: negative sigma_v3");

    SyntheticCatalog cat;
    cat.observations.reserve(n);
    cat.truth_points.reserve(n);
    for (int k = 0; k < n; ++k) {
        // radius from the enclosed-mass fraction by bisection
        const double u = rng.uniform();
        double hi = m.scale;
        while (model_enclosed_mass(m, hi) / m.total_mass < u) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (model_enclosed_mass(m, mid) / m.total_mass < u)
                lo = mid;
            else
                hi = mid;
        }
        const double r = 0.5 * (lo + hi);

        const double cos_t = rng.uniform(-1.0, 1.0);
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double phi_x = rng.uniform(0.0, 2.0 * kPi);
        const double v = sample_speed(rng, m, r);
        const double cos_tv = rng.uniform(-1.0, 1.0);
        const double sin_tv = std::sqrt(std::max(0.0, 1.0 - cos_tv * cos_tv));
        const double phi_v = rng.uniform(0.0, 2.0 * kPi);

        PhasePoint p;
        p.x = {r * sin_t * std::cos(phi_x), r * sin_t * std::sin(phi_x), r * cos_t};
        p.v = {v * sin_tv * std::cos(phi_v), v * sin_tv * std::sin(phi_v), v * cos_tv};
        cat.truth_points.push_back(p);

        Observation obs;
        obs.x1 = p.x[0];
        obs.x2 = p.x[1];
        obs.v3 = p.v[2];
        if (sigma_v3) {
            if (*sigma_v3 > 0.0) obs.v3 += rng.normal(0.0, *sigma_v3);
            obs.sigma_v3 = *sigma_v3;
        }
        cat.observations.push_back(obs);
    }
    return cat;
}

std::vector<double> truth_binned_density(const AnalyticModel& m, const RadialGrid& grid) {
    std::vector<double> rho(grid.bins());
    for (std::size_t i = 0; i < grid.bins(); ++i) {
        const double r0 = grid.edges[i], r1 = grid.edges[i + 1];
        const double dm = model_enclosed_mass(m, r1) - model_enclosed_mass(m, r0);
        const double vol = 4.0 * kPi / 3.0 * (r1 * r1 * r1 - r0 * r0 * r0);
        rho[i] = dm / vol;
    }
    return rho;
}

std::vector<double> truth_binned_df(const AnalyticModel& m, const EnergyGrid& egrid) {
    if (m.kind != ModelKind::Plummer)
        throw std::invalid_argument("truth_binned_df: model is not Plummer");
    const double floor = -model_potential(m, 0.0);
    const double c = plummer_df_prefactor(m);
    std::vector<double> f(egrid.bins(), 0.0);
    for (std::size_t j = 0; j < egrid.bins(); ++j) {
        const double e0 = egrid.edges[j], e1 = egrid.edges[j + 1];
        const double a = std::max(e0, floor);
        if (a >= e1) continue;
        // integral of c (-E)^{7/2} over [a, e1]
        const double integral =
            2.0 / 9.0 * c * (std::pow(-a, 4.5) - std::pow(std::max(0.0, -e1), 4.5));
        f[j] = integral / (e1 - e0);
    }
    return f;
}

}  // namespace darkmass
