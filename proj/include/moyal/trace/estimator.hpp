#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "moyal/trace/spectrum.hpp"

namespace moyal::trace {

struct EstimatorOptions {
    std::size_t n_min = 64;
    std::size_t n_max = std::size_t{1} << 20;  // inclusive cap
    bool use_eigenvalues = false;              // signed (Lidskii) sequence for Hermitian sources
    double relative_tol = 0.1;                 // measurability guard
    double absolute_tol = 1e-2;
};

struct TraceEstimate {
    std::vector<std::pair<std::size_t, double>> raw_means;  // (n, D_n)
    std::vector<double> window_means;                       // between successive grid points
    double limit = 0.0;
    double slope = 0.0;
    double residual = 0.0;
    double error_bar = 0.0;
    double window_variation = 0.0;
    bool measurable = false;

    std::vector<std::size_t> n_grid() const {
        std::vector<std::size_t> out;
        for (const auto& [n, v] : raw_means) out.push_back(n);
        return out;
    }
};

namespace detail {

inline const std::vector<double>& sequence(const SingularSpectrum& s, bool use_eigenvalues) {
    if (use_eigenvalues) {
        if (!s.has_eigenvalues()) throw DomainError("estimator: signed sequence requested but spectrum has no eigenvalues");
        return s.eigenvalues;
    }
    return s.values;
}

// compensated prefix sums
inline std::vector<double> prefix_sums(const std::vector<double>& a) {
    std::vector<double> out(a.size());
    double acc = 0.0, c = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = acc + a[k];
        c += std::abs(acc) >= std::abs(a[k]) ? (acc - t) + a[k] : (a[k] - t) + acc;
        acc = t;
        out[k] = acc + c;
    }
    return out;
}

}  // namespace detail

// (1 / log(2+n)) sum_{k<=n} mu(k)
inline double log_cesaro(const SingularSpectrum& s, std::size_t n, bool use_eigenvalues = false) {
    const auto& a = detail::sequence(s, use_eigenvalues);
    if (n >= a.size()) throw DomainError("log_cesaro: n out of range");
    double acc = 0.0, c = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = acc + a[k];
        c += std::abs(acc) >= std::abs(a[k]) ? (acc - t) + a[k] : (a[k] - t) + acc;
        acc = t;
    }
    return (acc + c) / std::log(2.0 + static_cast<double>(n));
}

// dyadic points in [n_min, cap] plus the cap itself
inline std::vector<std::size_t> dyadic_grid(std::size_t n_min, std::size_t cap) {
    std::vector<std::size_t> out;
    for (std::size_t n = 1; n <= cap; n *= 2)
        if (n >= n_min) out.push_back(n);
    if (cap >= n_min && (out.empty() || out.back() != cap)) out.push_back(cap);
    return out;
}

// least squares D_n ~ c0 + c1 / log(2+n); limit = c0
inline TraceEstimate dixmier_estimate(const SingularSpectrum& s, const EstimatorOptions& opt = {}) {
    if (s.count() < 64) throw DomainError("dixmier_estimate: need at least 64 values");
    const auto& a = detail::sequence(s, opt.use_eigenvalues);
    const std::size_t cap = std::min(opt.n_max, s.count() - 1);
    const auto grid = dyadic_grid(opt.n_min, cap);
    if (grid.size() < 3) throw DomainError("dixmier_estimate: estimator window holds fewer than 3 points");

    const auto sums = detail::prefix_sums(a);
    TraceEstimate e;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t n : grid) {
        const double l = std::log(2.0 + static_cast<double>(n));
        const double dn = sums[n] / l;
        e.raw_means.emplace_back(n, dn);
        const double x = 1.0 / l;
        sx += x;
        sy += dn;
        sxx += x * x;
        sxy += x * dn;
    }
    const double m = static_cast<double>(grid.size());
    const double det = m * sxx - sx * sx;
    e.slope = (m * sxy - sx * sy) / det;
    e.limit = (sy - e.slope * sx) / m;

    double rss = 0.0;
    for (const auto& [n, dn] : e.raw_means) {
        const double r = dn - (e.limit + e.slope / std::log(2.0 + static_cast<double>(n)));
        rss += r * r;
    }
    e.residual = std::sqrt(rss / m);

    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const double num = sums[grid[j + 1]] - sums[grid[j]];
        const double den = std::log(2.0 + static_cast<double>(grid[j + 1])) - std::log(2.0 + static_cast<double>(grid[j]));
        e.window_means.push_back(num / den);
        e.window_variation = std::max(e.window_variation, std::abs(e.window_means.back() - e.limit));
    }
    e.error_bar = e.residual + e.window_variation;

    const double scale = std::abs(e.limit);
    const bool stable = e.window_variation <= opt.relative_tol * scale || e.window_variation <= opt.absolute_tol;
    const bool fitted = e.residual <= opt.relative_tol * scale || e.residual <= opt.absolute_tol;
    e.measurable = stable && fitted;
    return e;
}

// window variation relative to the extrapolated limit
inline double measurability_diagnostic(const TraceEstimate& e) {
    if (e.window_variation == 0.0) return 0.0;
    if (e.limit == 0.0) return INFINITY;
    return e.window_variation / std::abs(e.limit);
}

inline double measurability_diagnostic(const SingularSpectrum& s, const EstimatorOptions& opt = {}) {
    if (s.count() < 256) throw DomainError("measurability_diagnostic: need at least 256 values");
    return measurability_diagnostic(dixmier_estimate(s, opt));
}

// window for grid spectra: n from n_min to fraction * #{k : |a_k| >= |a_0| * edge_ratio}
inline EstimatorOptions grid_options(const SingularSpectrum& s, double edge_ratio, double fraction = 0.6, std::size_t n_min = 4,
                                     bool use_eigenvalues = false) {
    EstimatorOptions opt;
    opt.n_min = n_min;
    opt.use_eigenvalues = use_eigenvalues;
    std::size_t resolved = 0;
    const double top = s.count() ? s.values[0] : 0.0;
    for (double v : s.values)
        if (v >= top * edge_ratio && top > 0.0) ++resolved;
    if (top == 0.0) resolved = s.count();
    opt.n_max = static_cast<std::size_t>(fraction * static_cast<double>(resolved));
    return opt;
}

}  // namespace moyal::trace
