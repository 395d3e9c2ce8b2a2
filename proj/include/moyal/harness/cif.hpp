#pragma once

#include <cmath>
#include <optional>

#include "moyal/harness/report.hpp"
#include "moyal/harness/symbols.hpp"
#include "moyal/spectral/cwikel.hpp"
#include "moyal/trace/estimator.hpp"

namespace moyal::harness {

struct TauValue {
    double full = 0.0;
    double corner = 0.0;
};

// tau(x) on the Fock reference grid; a square y^* y is traced as Tr(r(y)^* r(y))
inline TauValue fock_tau(const ExperimentConfig& c, const SymbolSpec& s, double theta0) {
    if (c.d != 2) throw ConfigError("d", "the trace reference uses the Fock representation, d = 2 only");
    const GridSpec fg = c.fock_grid();
    const ThetaMatrix th = make_theta(2, theta0);
    const int half = c.fock_m / 2;
    if (s.family == "square") {
        SymbolSpec base = s;
        base.family = s.of;
        base.scale = 1.0;
        const Eigen::MatrixXcd ry = fock::represent(make_symbol(base, fg, th), c.fock_m, th).matrix;
        const Eigen::MatrixXcd x = ry.adjoint() * ry;
        return {s.scale * x.trace().real(), s.scale * x.topLeftCorner(half, half).trace().real()};
    }
    const auto t = fock::trace_tau_report(fock::represent(make_symbol(s, fg, th), c.fock_m, th));
    return {t.full.real(), t.corner.real()};
}

// estimator window: n from n_min to a fraction of the values above the resolvent weight at the box edge
inline trace::EstimatorOptions cif_options(const ExperimentConfig& c, const GridSpec& g, const trace::SingularSpectrum& s) {
    std::vector<double> edge(g.d, 0.0);
    edge[0] = g.length / 2;
    const double ratio = spectral::variant_weight(c.variant, edge.data(), g.d);
    auto o = trace::grid_options(s, ratio, c.cap_fraction, c.n_min, s.has_eigenvalues());
    o.relative_tol = c.relative_tol;
    return o;
}

struct CifRun {
    int n = 0;
    GridSpec grid;
    double theta0 = 0.0;
    Symbol symbol;
    TauValue tau;
    double grid_tau = 0.0;
    trace::SingularSpectrum spectrum;
    trace::TraceEstimate estimate;
    double discrepancy = 0.0;  // relative to tau, absolute when tau = 0
    double diagnostic = 0.0;
    double cyclicity = 0.0;
    double spectral_floor = 0.0;
};

inline std::map<std::string, std::string> spectrum_meta(const GridSpec& g, double theta0, spectral::Variant v, const Symbol& f,
                                                        const std::string& source) {
    return {{"grid", g.describe()}, {"theta0", format_double(theta0)}, {"variant", spectral::to_string(v)},
            {"symbol hash", hash_hex(f.hash())}, {"source", source}};
}

// x g^{1/2} ... g^{1/2} spectrum, Dixmier estimate, comparison with tau(x)
inline CifRun cif_run(const ExperimentConfig& c, int n) {
    CifRun run;
    run.n = n;
    run.grid = c.grid_for(n);
    const ThetaMatrix th = c.theta_for(n);
    run.theta0 = th.theta0;
    run.symbol = make_symbol(c.symbol, run.grid, th);
    run.tau = fock_tau(c, c.symbol, th.theta0);

    spectral::CwikelOperator op = spectral::cwikel_operator(run.symbol, th, c.variant);
    const bool positive = c.symbol.family == "square" || c.symbol.family == "zero";
    spectral::Symmetrized sym = spectral::symmetrize(op, th, positive && c.symbol.scale >= 0.0);
    if (sym.spectrum.count() == 0) sym.spectrum = spectral::singular_spectrum(sym.op.matrix, sym.op.label);
    run.spectrum = std::move(sym.spectrum);
    run.spectrum.source = "g^{1/2} x g^{1/2}, " + run.grid.describe();
    run.spectral_floor = sym.spectral_floor;

    // sum of eigenvalues against Tr(x g) of the unsymmetrized product
    double eig_sum = 0.0;
    for (double e : run.spectrum.eigenvalues) eig_sum += e;
    const double tr = op.matrix.matrix.trace().real();
    run.cyclicity = std::abs(eig_sum - tr) / std::max(1e-300, std::max(std::abs(tr), run.spectrum.count() ? run.spectrum.values[0] : 0.0));
    run.grid_tau = grid_trace(quantize(run.grid, th, run.symbol), th).real();

    run.estimate = trace::dixmier_estimate(run.spectrum, cif_options(c, run.grid, run.spectrum));
    run.diagnostic = trace::measurability_diagnostic(run.estimate);
    run.discrepancy = std::abs(run.tau.full) > 1e-12 ? std::abs(run.estimate.limit - run.tau.full) / std::abs(run.tau.full)
                                                     : std::abs(run.estimate.limit);
    return run;
}

inline std::string cif_tag(const CifRun& run, const std::string& what = "cif") { return what + "_N" + std::to_string(run.n); }

inline void record(RunReport& r, const ExperimentConfig& c, const CifRun& run, const std::string& tag) {
    r.estimates.push_back({tag, run.estimate,
                           {{"tau", run.tau.full}, {"tau_corner", run.tau.corner}, {"grid_tau", run.grid_tau}, {"discrepancy", run.discrepancy}}});
    r.spectra.push_back({tag, run.spectrum, spectrum_meta(run.grid, run.theta0, c.variant, run.symbol, run.spectrum.source)});
}

inline std::string cif_detail(const CifRun& run) {
    return "limit " + format_double(run.estimate.limit) + " +- " + sci(run.estimate.error_bar) + ", tau " + format_double(run.tau.full) +
           " (corner " + format_double(run.tau.corner) + ", grid " + format_double(run.grid_tau) + ")";
}

inline void cif_checks(RunReport& r, const CifRun& run) {
    const std::string at = " at N = " + std::to_string(run.n);
    if (std::abs(run.tau.full) > 1e-12) {
        r.check_le("CIF: |limit - tau(x)| / tau(x)" + at, run.discrepancy, 0.15, cif_detail(run));
        r.check_le("CIF: measurability diagnostic" + at, run.diagnostic, 0.1);
    } else {
        r.check_le("CIF: tau(x) = 0 and the estimate vanishes" + at, run.estimate.limit, std::max(run.estimate.error_bar, 1e-12), cif_detail(run));
    }
    r.check_le("sum of eigenvalues = Tr(x g(nabla))" + at, run.cyclicity, 1e-10);
}

inline trace::TraceEstimate estimate_operator(const ExperimentConfig& c, const GridOperator& x, trace::SingularSpectrum* out = nullptr) {
    const GridOperator a = spectral::symmetric_form(x, c.variant);
    auto s = spectral::singular_spectrum(a.matrix, a.label);
    const auto e = trace::dixmier_estimate(s, cif_options(c, x.grid, s));
    if (out) *out = std::move(s);
    return e;
}

// estimates for U(-a) x U(a), a = theta^{-1} t
inline void cif_invariance(RunReport& r, const ExperimentConfig& c, const CifRun& run) {
    const ThetaMatrix th = make_theta(run.grid.d, run.theta0);
    const GridOperator x = quantize(run.grid, th, run.symbol);
    std::vector<std::vector<int>> shifts = c.shifts;
    if (shifts.empty()) shifts = {{1, 0}, {0, 2}, {-3, 1}};
    for (const auto& a : shifts) {
        Stopwatch sw;
        trace::SingularSpectrum s;
        const auto e = estimate_operator(c, shift_conjugate(x, th, a), &s);
        std::string name = "shift";
        for (int v : a) name += "_" + std::to_string(v);
        r.estimates.push_back({cif_tag(run, "invariance_" + name), e, {{"reference_limit", run.estimate.limit}}});
        double gap = 0.0;
        for (std::size_t k = 0; k < s.count(); ++k) gap = std::max(gap, std::abs(s.eigenvalues[k] - run.spectrum.eigenvalues[k]));
        const std::string at = "a = (" + join(a) + "), N = " + std::to_string(run.n);
        r.check_le("invariance: estimate of U(-a) x U(a) agrees, " + at, e.limit - run.estimate.limit, e.error_bar + run.estimate.error_bar,
                   "limit " + format_double(e.limit) + " vs " + format_double(run.estimate.limit));
        r.check_le("invariance: spectrum unchanged, " + at, gap / run.spectrum.values[0], 1e-10);
        r.timings.emplace_back("invariance " + name, sw.seconds());
    }
}

// z = x - tau(x) x0 with tau(x0) = 1 for a compact bump x0
inline void cif_zero_trace(RunReport& r, const ExperimentConfig& c, const CifRun& run) {
    Stopwatch sw;
    const ThetaMatrix th = make_theta(run.grid.d, run.theta0);
    SymbolSpec bump;
    bump.family = "bump";
    bump.radius = c.reference_radius;
    const TauValue t0 = fock_tau(c, bump, run.theta0);
    const Symbol f0 = radial_bump(run.grid, c.reference_radius);
    const Symbol fz = run.symbol - Complex(run.tau.full / t0.full, 0.0) * f0;
    const GridOperator z = quantize(run.grid, th, fz);
    trace::SingularSpectrum s;
    const auto e = estimate_operator(c, z, &s);
    const std::string tag = cif_tag(run, "zero_trace");
    r.estimates.push_back({tag, e, {{"tau_x", run.tau.full}, {"tau_x0_raw", t0.full}, {"tau_x0_corner", t0.corner}, {"grid_tau_z", grid_trace(z, th).real()}}});
    r.spectra.push_back({tag, s, spectrum_meta(run.grid, run.theta0, c.variant, fz, "g^{1/2} z g^{1/2}, z = x - tau(x) x0")});
    r.check_le("zero trace: estimate of z = x - tau(x) x0 vanishes, N = " + std::to_string(run.n), e.limit, e.error_bar,
               "limit " + format_double(e.limit) + " +- " + sci(e.error_bar) + ", tau(x0) before normalization " + format_double(t0.full) +
                   " (corner " + format_double(t0.corner) + ")");
    r.timings.emplace_back("zero trace", sw.seconds());
}

// estimate for 2x against twice the estimate for x
inline void cif_linearity(RunReport& r, const ExperimentConfig& c, const CifRun& run) {
    Stopwatch sw;
    const ThetaMatrix th = make_theta(run.grid.d, run.theta0);
    const auto e = estimate_operator(c, quantize(run.grid, th, Complex(2.0, 0.0) * run.symbol));
    r.estimates.push_back({cif_tag(run, "linearity"), e, {{"twice_reference", 2.0 * run.estimate.limit}}});
    r.check_le("linearity: estimate(2x) = 2 estimate(x), N = " + std::to_string(run.n), e.limit - 2.0 * run.estimate.limit,
               e.error_bar + 2.0 * run.estimate.error_bar);
    r.timings.emplace_back("linearity", sw.seconds());
}

inline RunReport cif_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const CifRun run = cif_run(c, c.n);
    r.timings.emplace_back("cif N=" + std::to_string(c.n), sw.seconds());
    record(r, c, run, cif_tag(run));
    cif_checks(r, run);
    if (c.cif_invariance) cif_invariance(r, c, run);
    if (c.cif_zero_trace && c.symbol.family != "zero") cif_zero_trace(r, c, run);
    if (c.cif_linearity) cif_linearity(r, c, run);
    return r;
}

// CIF discrepancy across grids; checks at the finest grid and the trend
inline RunReport cif_sweep(const ExperimentConfig& c, std::vector<CifRun>* runs = nullptr) {
    RunReport r;
    std::vector<int> ns = c.sweep_n.empty() ? std::vector<int>{c.n} : c.sweep_n;
    std::sort(ns.begin(), ns.end());
    std::vector<CifRun> all;
    for (int n : ns) {
        Stopwatch sw;
        all.push_back(cif_run(c, n));
        record(r, c, all.back(), cif_tag(all.back()));
        r.timings.emplace_back("cif N=" + std::to_string(n), sw.seconds());
    }
    std::string trend;
    bool monotone = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        trend += (i ? ", " : "") + ("N=" + std::to_string(all[i].n)) + ": " + sci(all[i].discrepancy);
        if (i > 0 && all[i].discrepancy > all[i - 1].discrepancy) monotone = false;
    }
    cif_checks(r, all.back());
    r.check("CIF discrepancy non-increasing over N", monotone, all.back().discrepancy, all.front().discrepancy, trend);
    if (runs) *runs = std::move(all);
    return r;
}

}  // namespace moyal::harness
