#include "darkmass/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace darkmass {

namespace {

std::size_t ceil_count(double mass, std::size_t n) {
    // ceil(mass * n) with a relative fudge so exact products do not round up
    const double x = mass * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

double most_frequent_value(const std::vector<double>& sorted) {
    double best = sorted.front();
    std::size_t best_count = 0, i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best = sorted[i];
        }
        i = j;
    }
    return best;
}

}  // namespace

HpdInterval hpd_interval(std::vector<double> samples, double mass) {
    if (samples.size() < 20) throw std::invalid_argument("hpd_interval: need >= 20 samples");
    if (!(mass > 0.0 && mass < 1.0))
        throw std::invalid_argument("hpd_interval: mass outside (0,1)");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const std::size_t m = std::min(n, std::max<std::size_t>(1, ceil_count(mass, n)));
    std::size_t best = 0;
    double best_width = samples[m - 1] - samples[0];
    for (std::size_t i = 1; i + m <= n; ++i) {
        const double width = samples[i + m - 1] - samples[i];
        if (width < best_width) {
            best_width = width;
            best = i;
        }
    }
    return HpdInterval{samples[best], samples[best + m - 1]};
}

double marginal_mode(std::vector<double> samples) {
    if (samples.size() < 20) throw std::invalid_argument("marginal_mode: need >= 20 samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const double q1 = samples[static_cast<std::size_t>(0.25 * (n - 1))];
    const double q3 = samples[static_cast<std::size_t>(0.75 * (n - 1))];
    const double iqr = q3 - q1;
    if (!(iqr > 0.0)) return most_frequent_value(samples);

    const double h = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    const double lo = samples.front(), hi = samples.back();
    const std::size_t nbins =
        std::min<std::size_t>(1u << 22, static_cast<std::size_t>(std::ceil((hi - lo) / h)));
    std::vector<std::size_t> counts(std::max<std::size_t>(nbins, 1), 0);
    const double width = (hi - lo) / static_cast<double>(counts.size());
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= counts.size()) b = counts.size() - 1;
        ++counts[b];
    }
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) -
                                 counts.begin());  // first maximum = smallest midpoint
    return lo + (static_cast<double>(best) + 0.5) * width;
}

double effective_sample_size(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) return static_cast<double>(n);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) return static_cast<double>(n);

    const auto acf = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
        return s / (static_cast<double>(n) * var);
    };

    // Geyer initial positive sequence over paired lags.
    double tau = 1.0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; 2 * k + 1 < n; ++k) {
        double pair = acf(2 * k - 1) + acf(2 * k);
        if (pair < 0.0) break;
        pair = std::min(pair, prev_pair);  // enforce monotone decrease
        tau += 2.0 * pair;
        prev_pair = pair;
        if (2 * k > 10000) break;
    }
    const double ess = static_cast<double>(n) / tau;
    return std::clamp(ess, 1.0, static_cast<double>(n));
}

double gelman_rubin(const std::vector<std::vector<double>>& per_chain) {
    const std::size_t m = per_chain.size();
    if (m < 2) return 0.0;
    std::size_t n = per_chain.front().size();
    for (const auto& c : per_chain) n = std::min(n, c.size());
    if (n < 2) return 0.0;

    std::vector<double> means(m, 0.0), vars(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < n; ++i) means[c] += per_chain[c][i];
        means[c] /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = per_chain[c][i] - means[c];
            vars[c] += d * d;
        }
        vars[c] /= static_cast<double>(n - 1);
    }
    double grand = 0.0;
    for (double mu : means) grand += mu;
    grand /= static_cast<double>(m);
    double w = 0.0;
    for (double v : vars) w += v;
    w /= static_cast<double>(m);
    double b_over_n = 0.0;
    for (double mu : means) b_over_n += (mu - grand) * (mu - grand);
    b_over_n /= static_cast<double>(m - 1);
    if (!(w > 0.0)) return 1.0;
    const double nn = static_cast<double>(n);
    const double v_hat = (nn - 1.0) / nn * w + (1.0 + 1.0 / static_cast<double>(m)) * b_over_n;
    return std::sqrt(v_hat / w);
}

ParameterSummary enclosed_mass_summary(const std::vector<ChainSample>& samples,
                                       const RadialGrid& grid, double hpd_mass) {
    if (samples.empty()) throw std::invalid_argument("enclosed_mass_summary: empty chain");
    const double r1 = grid.edges[1];
    const double factor = 4.0 * std::numbers::pi / 3.0 * r1 * r1 * r1;
    std::vector<double> mass(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) mass[i] = factor * samples[i].rho[0];

    ParameterSummary out;
    out.name = "enclosed_mass_r1";
    double mean = 0.0;
    for (double v : mass) mean += v;
    out.mean = mean / static_cast<double>(mass.size());
    const auto hpd = hpd_interval(mass, hpd_mass);
    out.hpd_lower = hpd.lower;
    out.hpd_upper = hpd.upper;
    out.mode = marginal_mode(mass);
    out.ess = effective_sample_size(mass);
    return out;
}

SummaryTable summarize_chains(const std::vector<Chain>& chains, const RadialGrid& grid,
                              double hpd_mass) {
    if (chains.empty()) throw std::invalid_argument("summarize_chains: no chains");
    SummaryTable table;
    table.hpd_mass = hpd_mass;
    table.n_chains = chains.size();
    table.n_rho = chains.front().n_rho;
    table.n_f = chains.front().n_f;

    std::vector<ChainSample> pooled;
    for (const auto& c : chains)
        pooled.insert(pooled.end(), c.samples.begin(), c.samples.end());
    table.n_samples = pooled.size();
    if (pooled.empty()) throw std::invalid_argument("summarize_chains: no stored samples");

    const std::size_t p = table.n_rho + table.n_f;
    const auto value_of = [&](const ChainSample& s, std::size_t j) {
        return j < table.n_rho ? s.rho[j] : s.f[j - table.n_rho];
    };

    for (std::size_t j = 0; j < p; ++j) {
        ParameterSummary ps;
        ps.name = j < table.n_rho ? "rho_" + std::to_string(j + 1)
                                  : "f_" + std::to_string(j - table.n_rho + 1);
        std::vector<double> pooled_vals(pooled.size());
        for (std::size_t i = 0; i < pooled.size(); ++i) pooled_vals[i] = value_of(pooled[i], j);
        double mean = 0.0;
        for (double v : pooled_vals) mean += v;
        ps.mean = mean / static_cast<double>(pooled_vals.size());
        const auto hpd = hpd_interval(pooled_vals, hpd_mass);
        ps.hpd_lower = hpd.lower;
        ps.hpd_upper = hpd.upper;
        ps.mode = marginal_mode(pooled_vals);

        double ess = 0.0;
        std::vector<std::vector<double>> per_chain;
        for (const auto& c : chains) {
            std::vector<double> vals(c.samples.size());
            for (std::size_t i = 0; i < c.samples.size(); ++i)
                vals[i] = value_of(c.samples[i], j);
            ess += effective_sample_size(vals);
            per_chain.push_back(std::move(vals));
        }
        ps.ess = ess;
        ps.rhat = gelman_rubin(per_chain);
        if (ps.rhat > 1.1)
            table.warnings.push_back(ps.name + ": Gelman-Rubin " + std::to_string(ps.rhat) +
                                     " exceeds 1.1");
        if (!(ps.hpd_lower <= ps.mode && ps.mode <= ps.hpd_upper))
            table.warnings.push_back(ps.name + ": mode outside the HPD interval");
        table.parameters.push_back(std::move(ps));
    }

    const auto map_it = std::max_element(
        pooled.begin(), pooled.end(),
        [](const ChainSample& a, const ChainSample& b) { return a.log_post < b.log_post; });
    table.map_rho = map_it->rho;
    table.map_f = map_it->f;
    table.map_log_post = map_it->log_post;

    table.enclosed_mass = enclosed_mass_summary(pooled, grid, hpd_mass);
    return table;
}

}  // namespace darkmass
