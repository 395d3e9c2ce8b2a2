#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "moyal/harness/report.hpp"
#include "moyal/harness/symbols.hpp"
#include "moyal/spectral/blocks.hpp"
#include "moyal/spectral/cwikel.hpp"
#include "moyal/spectral/kernel.hpp"

namespace moyal::harness {

// floor-multiplier block structure on an open box of integer side
inline RunReport block_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec g{c.d, c.blocks_side * c.blocks_ppu, static_cast<double>(c.blocks_side), Boundary::open_box};
    const ThetaMatrix th = make_theta(c.d, c.theta0_for(c.n));
    const Symbol f = product_bump(g);
    const std::string where = " (" + g.describe() + ")";

    const auto dec = spectral::block_decompose(f, th);
    r.check_le("sum of blocks T_{l1,l2} = x h(nabla)" + where, spectral::reconstruction_residual(dec, f, th), 1e-10);
    r.check_le("blocks in one family are pairwise orthogonal", spectral::orthogonality_residual(dec), 1e-12);

    const spectral::CellGeometry geo(g);
    double eq = 0.0, eq0 = 0.0, spec = 0.0;
    std::size_t tested = 0;
    // every m whose 3-cell patch is complete
    std::vector<std::vector<int>> ms{{}};
    for (int k = 0; k < g.d; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& p : ms)
            for (int v = geo.min_cell() + 1; v <= geo.max_cell() - 1; ++v)
                if (geo.cell_complete(v - 1) && geo.cell_complete(v) && geo.cell_complete(v + 1)) {
                    auto q = p;
                    q.push_back(v);
                    next.push_back(q);
                }
        ms = std::move(next);
    }
    for (const auto& m : ms)
        for (const auto& l1 : spectral::offsets_cube(g.d)) {
            const auto e = spectral::local_block_equivalence(f, th, m, l1);
            eq = std::max(eq, e.residual);
            spec = std::max(spec, e.spectral_residual);
            bool zero = true;
            for (int v : m) zero = zero && v == 0;
            if (zero) eq0 = std::max(eq0, e.residual);
            ++tested;
        }
    r.check_le("T_{0,l1} = S_{l1}", eq0, 1e-12);
    r.check_le("T_{m,l1} = U_m S_{l1} U_m^{-1} over " + std::to_string(tested) + " (m, l1) pairs", eq, 1e-10);
    r.check_le("spectrum of T_{m,l1} = spectrum of S_{l1}", spec, 1e-10);

    double merge = 0.0;
    for (const auto& fam : dec.families) merge = std::max(merge, spectral::merge_residual(fam));
    r.check_le("family spectrum = direct-sum merge of block spectra", merge, 1e-10);
    r.timings.emplace_back("blocks", sw.seconds());
    return r;
}

// trace-norm bound on random smooth periodic kernels
inline RunReport kernel_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    std::mt19937_64 rng(c.seed + 2);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double tau = 2.0 * std::numbers::pi;

    double worst_slack = INFINITY;
    bool all_smooth = true;
    for (int i = 0; i < c.kernel_count; ++i) {
        spectral::KernelOperator k;
        if (i % 2 == 0) {
            // trigonometric polynomial, degree <= 3 in d = 1, <= 2 in d = 2
            const int d = i % 4 == 0 ? 1 : 2, n = d == 1 ? 32 : 12, deg = d == 1 ? 3 : 2;
            std::vector<std::pair<std::vector<int>, Complex>> terms;
            for (int j = 0; j < 8; ++j) {
                std::uniform_int_distribution<int> md(-deg, deg);
                std::vector<int> m(2 * d);
                for (auto& v : m) v = md(rng);
                terms.emplace_back(m, Complex(normal(rng), normal(rng)));
            }
            k = spectral::kernel_operator(d, n, [&](const double* t, const double* s) {
                Complex acc(0.0, 0.0);
                for (const auto& [m, cf] : terms) {
                    double a = 0.0;
                    for (int q = 0; q < d; ++q) a += m[q] * t[q] + m[d + q] * s[q];
                    acc += cf * std::polar(1.0, tau * a);
                }
                return acc;
            });
        } else {
            const double a = 1.5 * unif(rng), b = 1.5 * unif(rng), cc = unif(rng), p1 = unif(rng), p2 = unif(rng);
            k = spectral::kernel_operator(1, 48, [&](const double* t, const double* s) {
                return std::exp(a * std::cos(tau * (t[0] - p1)) + Complex(0.0, b) * std::sin(tau * (s[0] - p2))) *
                       (1.0 + cc * std::polar(1.0, tau * (t[0] - s[0])));
            });
        }
        const double tn = spectral::trace_norm(k);
        worst_slack = std::min(worst_slack, (k.coeff_bound - tn) / k.coeff_bound);
        all_smooth = all_smooth && k.smooth;
    }
    r.check("|T|_1 <= sum |c| on " + std::to_string(c.kernel_count) + " random smooth kernels", worst_slack >= -1e-12, worst_slack, 0.0,
            "smallest relative slack");
    r.check("random smooth kernels pass the decay diagnostic", all_smooth, all_smooth ? 1.0 : 0.0, 1.0);

    const auto rank1 = spectral::kernel_operator(1, 32, [&](const double* t, const double* s) {
        return std::exp(std::cos(tau * t[0])) * std::exp(Complex(0.0, 1.0) * std::sin(tau * s[0])) * (1.0 + 0.5 * std::cos(tau * s[0]));
    });
    const double exact = std::sqrt(std::cyl_bessel_i(0.0, 2.0) * 1.125);
    const double got = spectral::trace_norm(rank1);
    r.check_le("rank-one kernel: |T|_1 = |a|_2 |b|_2", std::abs(got - exact), 1e-8, "closed form " + format_double(exact));
    r.check("rank-one kernel: bound holds", rank1.coeff_bound >= got * (1 - 1e-12), rank1.coeff_bound - got, 0.0);

    const auto zero = spectral::kernel_operator(1, 16, [](const double*, const double*) { return Complex(0.0, 0.0); });
    r.check_le("zero kernel: trace norm and bound vanish", std::max(spectral::trace_norm(zero), zero.coeff_bound), 0.0);

    const auto rough = spectral::kernel_operator(1, 32, [&](const double* t, const double* s) {
        return Complex(std::abs(std::sin(std::numbers::pi * (t[0] - s[0]))), 0.0);
    });
    r.check("non-smooth kernel is flagged", !rough.smooth, rough.tail_fraction, 1e-6, "tail fraction");
    r.timings.emplace_back("kernel", sw.seconds());
    return r;
}

struct CwikelPoint {
    int n = 0;
    double weak = 0.0;
    double trace_power = 0.0;
    double correction_trace = 0.0;
    double sup_k = 0.0;
};

inline double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo - 1.0 : INFINITY;
}

// k jumps across integer lines; its sup is approached at the corners u -> (a, b) from below or above
inline double corner_sup_k(const GridSpec& g) {
    const int r = static_cast<int>(std::floor(g.length / 2));
    const double eps = 1e-9;
    std::vector<double> u(g.d, 0.0);
    double top = 0.0;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            for (double ea : {-eps, eps})
                for (double eb : {-eps, eps}) {
                    u[0] = a + ea;
                    u[1] = b + eb;
                    top = std::max(top, std::abs(spectral::correction_function(u.data(), g.d)));
                }
    return top;
}

// weak quasinorm (smooth), trace norm (power) and the correction term across grids
inline RunReport cwikel_sweep(const ExperimentConfig& c, std::vector<CwikelPoint>* points = nullptr) {
    RunReport r;
    const std::vector<int> ns = c.sweep_n.empty() ? std::vector<int>{c.n} : c.sweep_n;
    std::vector<CwikelPoint> pts;
    for (int n : ns) {
        Stopwatch sw;
        const GridSpec g = c.grid_for(n);
        const ThetaMatrix th = c.theta_for(n);
        const Symbol f = make_symbol(c.symbol, g, th);
        CwikelPoint p{n};
        auto smooth = spectral::singular_values_of(spectral::cwikel_operator(f, th, spectral::Variant::smooth).matrix.matrix);
        p.weak = trace::weak_quasinorm(smooth);
        p.trace_power = trace::trace_norm(spectral::singular_values_of(spectral::cwikel_operator(f, th, spectral::Variant::power).matrix.matrix));
        const auto corr = spectral::correction_term(f, th);
        p.correction_trace = trace::trace_norm(spectral::singular_values_of(corr.op.matrix));
        p.sup_k = corr.sup_k;
        smooth.source = "x g(nabla), " + g.describe();
        r.spectra.push_back({"cwikel_smooth_N" + std::to_string(n), smooth,
                             {{"grid", g.describe()}, {"theta0", format_double(th.theta0)}, {"variant", "smooth"},
                              {"symbol hash", hash_hex(f.hash())}, {"source", smooth.source}}});
        r.timings.emplace_back("cwikel N=" + std::to_string(n), sw.seconds());
        pts.push_back(p);
    }
    std::vector<double> weak, tn, ct, sk;
    std::string detail;
    for (const auto& p : pts) {
        weak.push_back(p.weak);
        tn.push_back(p.trace_power);
        ct.push_back(p.correction_trace);
        sk.push_back(p.sup_k);
        detail += (detail.empty() ? "" : "; ") + ("N=" + std::to_string(p.n)) + ": weak " + format_double(p.weak) + ", |power|_1 " +
                  format_double(p.trace_power) + ", |corr|_1 " + format_double(p.correction_trace) + ", sup|k| " + format_double(p.sup_k);
    }
    r.check_le("weak quasinorm of x g(nabla) stable within 10%", spread(weak), 0.10, detail);
    r.check_le("trace norm of x (1-Delta)^{-(d+1)/2} stable within 5%", spread(tn), 0.05);
    r.check_le("sup |k| stable within 5%", spread(sk), 0.05,
               "one-sided limits at lattice corners of the last box give sup |k| = " + format_double(corner_sup_k(c.grid_for(ns.back()))));
    r.check_le("trace norm of the correction term stable within 10%", spread(ct), 0.10);
    if (points) *points = pts;
    return r;
}

}  // namespace moyal::harness
