#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "moyal/harness/report.hpp"
#include "moyal/harness/symbols.hpp"
#include "moyal/spectral/cwikel.hpp"
#include "moyal/trace/estimator.hpp"

namespace moyal::harness {

inline trace::SingularSpectrum harmonic_spectrum(std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = 1.0 / static_cast<double>(k + 1);
    return {std::move(v), {}, "harmonic"};
}

// H_m by the asymptotic series, independent of direct summation
inline double harmonic_number(double m) {
    const double g = 0.57721566490153286061;
    return std::log(m) + g + 1.0 / (2 * m) - 1.0 / (12 * m * m) + 1.0 / (120 * std::pow(m, 4)) - 1.0 / (252 * std::pow(m, 6));
}

inline RunReport tensor_checks(const trace::SingularSpectrum& harm, const trace::TraceEstimate& eh);
inline RunReport direct_sum_checks(std::uint64_t seed);

// synthetic-sequence checks: harmonic normalization, non-measurable profile, tensor and direct-sum calculus
inline RunReport trace_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const std::size_t count = c.trace_count;
    const auto harm = harmonic_spectrum(count);
    const std::size_t n = count - 1;
    const double oracle = harmonic_number(static_cast<double>(n + 1)) / std::log(2.0 + static_cast<double>(n));
    r.check_le("log_cesaro harmonic = H_{n+1}/log(2+n), n = " + std::to_string(n), trace::log_cesaro(harm, n) - oracle, 1e-12);

    const auto eh = trace::dixmier_estimate(harm);
    r.estimates.push_back({"harmonic", eh, {{"reference", 1.0}}});
    r.check_le("harmonic limit = 1", eh.limit - 1.0, 0.02, "error bar " + sci(eh.error_bar));
    r.check_le("harmonic measurability diagnostic", trace::measurability_diagnostic(eh), 0.05);

    std::vector<double> osc(count), tc(count);
    for (std::size_t k = 0; k < count; ++k) {
        const int j = static_cast<int>(std::floor(std::log2(static_cast<double>(k + 1))));
        osc[k] = (2.0 + (j % 2 == 0 ? 1.0 : -1.0)) / static_cast<double>(k + 1);
        tc[k] = 1.0 / std::pow(static_cast<double>(k + 1), 2);
    }
    std::stable_sort(osc.begin(), osc.end(), std::greater<double>());
    const auto eo = trace::dixmier_estimate(trace::SingularSpectrum{osc, {}, "oscillating"});
    r.estimates.push_back({"oscillating", eo, {}});
    r.check("oscillating log-density is flagged not measurable", !eo.measurable, trace::measurability_diagnostic(eo), 0.2,
            "diagnostic must reach 0.2");
    r.check("oscillating diagnostic >= 0.2", trace::measurability_diagnostic(eo) >= 0.2, trace::measurability_diagnostic(eo), 0.2);
    const auto et = trace::dixmier_estimate(trace::SingularSpectrum{tc, {}, "trace class"});
    r.check_le("trace-class spectrum has limit 0", et.limit, 0.01);
    const trace::SingularSpectrum zero{std::vector<double>(1024, 0.0), {}, "zero"};
    r.check_le("zero spectrum: log_cesaro and diagnostic vanish",
               std::max(std::abs(trace::log_cesaro(zero, 1000)), trace::measurability_diagnostic(zero)), 0.0);
    const auto e3 = trace::dixmier_estimate(trace::scaled(harm, 3.0));
    r.check_le("homogeneity: limit(3 mu) = 3 limit(mu)", std::abs(e3.limit - 3.0 * eh.limit) / (3.0 * eh.limit), 1e-12);

    // additivity on commuting positive diagonal models
    std::vector<double> a(count), b(count), ab(count);
    for (std::size_t k = 0; k < count; ++k) {
        a[k] = 1.0 / (k + 1.0);
        b[k] = 2.0 / (k + 3.0);
        ab[k] = a[k] + b[k];
    }
    const auto ea = trace::dixmier_estimate(trace::from_values(a)), eb = trace::dixmier_estimate(trace::from_values(b)),
               eab = trace::dixmier_estimate(trace::from_values(ab));
    r.check_le("additivity on commuting positive summands", eab.limit - ea.limit - eb.limit, eab.error_bar + ea.error_bar + eb.error_bar);

    r.append(tensor_checks(harm, eh));
    r.append(direct_sum_checks(c.seed));
    r.timings.emplace_back("traces", sw.seconds());
    return r;
}

inline RunReport tensor_checks(const trace::SingularSpectrum& harm, const trace::TraceEstimate& eh) {
    RunReport r;
    const auto same = trace::tensor_spectrum({1.0}, harm);
    r.check_le("S = (1): tensor spectrum unchanged", same.values == harm.values ? 0.0 : 1.0, 0.0);
    const double eps = 1e-6;
    const std::vector<std::vector<double>> cases = {{0.5, 0.5}, {1.0, eps}, {0.5, 0.3, 0.2}};
    for (const auto& s : cases) {
        double tr = 0.0;
        std::string name = "S = (";
        for (std::size_t i = 0; i < s.size(); ++i) {
            tr += s[i];
            name += (i ? ", " : "") + format_double(s[i]);
        }
        name += ")";
        const auto e = trace::dixmier_estimate(trace::tensor_spectrum(s, harm));
        std::string tag = "tensor_";
        for (double v : s) tag += sci(v) + "_";
        tag.pop_back();
        r.estimates.push_back({tag, e, {{"trace_S", tr}, {"harmonic_limit", eh.limit}}});
        r.check_le("tensor factorization " + name + ": limit within 3% of Tr(S)", (e.limit - tr) / tr, 0.03,
                   "limit " + format_double(e.limit) + ", Tr(S) limit(t) " + format_double(tr * eh.limit));
        if (s.size() == 2 && s[1] == eps) r.check_le("epsilon split: limit within 2 eps + 0.03 of 1", e.limit - 1.0, 2 * eps + 0.03);
    }
    return r;
}

// merge of block spectra against a dense block-diagonal oracle
inline RunReport direct_sum_checks(std::uint64_t seed) {
    RunReport r;
    std::mt19937_64 rng(seed + 3);
    std::normal_distribution<double> normal;
    const std::vector<int> sizes = {1, 40, 259, 700, 500};
    int dim = 0;
    for (int s : sizes) dim += s;
    Eigen::MatrixXcd whole = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<trace::SingularSpectrum> parts;
    int off = 0;
    for (int s : sizes) {
        Eigen::MatrixXcd b(s, s);
        for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = Complex(normal(rng), normal(rng)) / std::sqrt(2.0 * s);
        whole.block(off, off, s, s) = b;
        parts.push_back(spectral::singular_values_of(b));
        off += s;
    }
    const auto merged = trace::direct_sum_spectrum(parts);
    const auto dense = spectral::singular_values_of(whole);
    double err = 0.0;
    for (std::size_t k = 0; k < dense.count(); ++k) err = std::max(err, std::abs(dense.values[k] - merged.values[k]));
    r.check_le("direct-sum merge = dense block-diagonal spectrum, dim " + std::to_string(dim), err, 1e-12);
    const auto single = trace::direct_sum_spectrum({parts[2]});
    r.check_le("direct sum of one part is the identity", single.values == parts[2].values ? 0.0 : 1.0, 0.0);
    return r;
}

}  // namespace moyal::harness
