#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "moyal/calculus/calculus.hpp"
#include "moyal/harness/report.hpp"
#include "moyal/harness/symbols.hpp"

namespace moyal::harness {

inline double hs_relative(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const double n = b.norm();
    return n > 0.0 ? (a - b).norm() / n : a.norm();
}

inline RunReport multiplier_suite(const ExperimentConfig& c);

// derivatives, translations, nabla conjugation, the averaging operator T_phi
inline RunReport calculus_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec g = c.grid();
    if (g.boundary != Boundary::torus) throw ConfigError("boundary", "the calculus suite runs in torus mode");
    if (g.d != 2) throw ConfigError("d", "the calculus suite ships for d = 2");
    const ThetaMatrix th = c.theta();
    const GridSpec gb{g.d, g.n, g.length, Boundary::open_box};
    std::mt19937_64 rng(c.seed + 1);
    const std::string where = " (" + g.describe() + ")";

    auto test_symbol = [](const GridSpec& grid) {
        return Symbol::sample(grid, [](const double* s) {
            const double r2 = (s[0] - 0.3) * (s[0] - 0.3) + (s[1] + 0.2) * (s[1] + 0.2);
            return std::exp(-0.5 * r2) * std::polar(1.0, 0.5 * s[0]);
        });
    };
    const Symbol f = test_symbol(g), fb = test_symbol(gb);
    const GridOperator x = quantize(g, th, f), xb = quantize(gb, th, fb);

    const std::vector<calculus::MultiIndex> alphas = {{{0}}, {{1}}, {{0, 1}}, {{1, 1, 0}}};
    double d_box = 0.0;
    MaskedMax d_torus;
    for (const auto& a : alphas) {
        d_box = std::max(d_box, max_abs(quantize(gb, th, calculus::derivative_symbol(fb, a)).matrix - calculus::derivative_dense(xb, a).matrix));
        const MaskedMax m = masked_max(g, quantize(g, th, calculus::derivative_symbol(f, a)).matrix - calculus::derivative_dense(x, a).matrix);
        d_torus.seam_free = std::max(d_torus.seam_free, m.seam_free);
        d_torus.full = std::max(d_torus.full, m.full);
    }
    r.check_le("Op(s^alpha f) = d^alpha Op(f), open box", d_box, 1e-12);
    r.check_le("Op(s^alpha f) = d^alpha Op(f), torus entries off the seam", d_torus.seam_free, 1e-12,
               "full torus residual " + sci(d_torus.full) + " comes from wrapped entries");

    double top = 0.0;
    for (const auto& v : f.values) top = std::max(top, std::abs(v));
    double tr = 0.0, cov = 0.0, nab = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const auto t = random_steps(rng, g);
        const Symbol closed = calculus::translate_conjugate(f, th, t), dense = calculus::translate_conjugate_dense(f, th, t);
        for (std::size_t i = 0; i < f.values.size(); ++i) tr = std::max(tr, std::abs(closed.values[i] - dense.values[i]) / top);

        const auto ts = random_steps(rng, g, 3);
        for (const auto& a : {alphas[0], alphas[2]}) {
            const auto lhs = calculus::derivative_dense(shift_conjugate(xb, th, ts), a);
            const auto rhs = shift_conjugate(calculus::derivative_dense(xb, a), th, ts);
            cov = std::max(cov, max_abs(lhs.matrix - rhs.matrix));
        }

        std::vector<double> tt(g.d);
        const auto av = positions(g, ts);
        th.apply(av.data(), tt.data());
        nab = std::max(nab, max_abs(calculus::nabla_conjugate(x, tt).matrix - shift_conjugate(x, th, ts).matrix));
    }
    r.check_le("translate_conjugate closed form = dense U(-t) Op(f) U(t)" + where, tr, 1e-12);
    r.check_le("d^alpha(U(-t) x U(t)) = U(-t) d^alpha(x) U(t), open box", cov, 1e-12);
    r.check_le("e^{i<theta a,nabla>} x e^{-i<theta a,nabla>} = U(-a) x U(a)" + where, nab, 1e-12);

    // Lipschitz bound on lattice neighbours: |U(-t)xU(t) - x|_2 <= |theta t| | |s| f |_2
    double lip = 0.0;
    const Symbol sf = Symbol::sample(g, [&](const double* s) { return Complex(std::hypot(s[0], s[1]), 0.0); });
    Symbol weighted = f;
    for (std::size_t i = 0; i < f.values.size(); ++i) weighted.values[i] *= sf.values[i];
    for (int k = 0; k < g.d; ++k) {
        std::vector<int> step(g.d, 0);
        step[k] = 1;
        const double dist = (shift_conjugate(x, th, step).matrix - x.matrix).norm() * hs_calibration(g);
        const double bound = th.theta0 * g.spacing() * weighted.l2_norm();
        lip = std::max(lip, dist / bound);
    }
    r.check("translation is Lipschitz on lattice neighbours", lip <= 1.0 + 1e-12, lip, 1.0, "ratio to |theta t| | |s| f |_2");

    r.append(multiplier_suite(c));
    r.timings.emplace_back("calculus", sw.seconds());
    return r;
}

// T_phi against the symbol multiplier, on U(s), and as an L1 contraction
inline RunReport multiplier_suite(const ExperimentConfig& c) {
    RunReport r;
    const GridSpec g = c.grid();
    if (g.boundary != Boundary::torus) throw ConfigError("boundary", "the multiplier suite runs in torus mode");
    if (g.d != 2) throw ConfigError("d", "the multiplier suite ships for d = 2");
    const ThetaMatrix th = c.theta();
    const std::string where = " (" + g.describe() + ")";
    const auto phi = calculus::gaussian_weight(g.d);
    const auto fphi = calculus::gaussian_transform(g.d);
    std::vector<std::pair<std::string, Symbol>> corpus;
    corpus.emplace_back("gaussian", gaussian(g, 1.0));
    corpus.emplace_back("shifted gaussian", gaussian(g, 0.8, {0.8, -0.5}));
    corpus.emplace_back("matrix unit (1,2)", fock::matrix_unit_symbol(1, 2, g, th, 1e-3));
    double worst = 0.0, halving = 0.0;
    std::string detail;
    for (const auto& [name, sym] : corpus) {
        const auto avg = calculus::conjugation_average(quantize(g, th, sym), th, fphi);
        const double d = hs_relative(avg.value.matrix, quantize(g, th, calculus::fourier_multiplier(sym, phi)).matrix);
        worst = std::max(worst, d);
        halving = std::max(halving, avg.halving_difference);
        detail += (detail.empty() ? "" : ", ") + name + " " + sci(d);
        if (avg.accuracy_warning)
            r.warnings.push_back("conjugation average for " + name + ": stride-2 rule differs by " + sci(avg.halving_difference) +
                                 " (bounds the coarse rule only)");
    }
    r.check_le("Fourier multiplier: Op(phi f) = T_phi Op(f) (relative HS)" + where, worst, 1e-3, detail + "; halving " + sci(halving));

    const std::vector<int> s1 = {2, -1};
    const GridOperator us = twisted_shift(g, th, s1);
    const auto sv = positions(g, s1);
    const auto avg = calculus::conjugation_average(us, th, fphi);
    r.check_le("T_phi U(s) = phi(s) U(s) (relative HS)", hs_relative(avg.value.matrix, phi(sv.data()) * us.matrix), 1e-3);

    // ||T_phi x||_1 <= ||F phi||_1 ||x||_1 with ||F phi||_1 = 1 for the Gaussian
    const GridSpec fg = c.fock_grid();
    const ThetaMatrix th2 = make_theta(2, th.theta0);
    const fock::DisplacementTable table(fg, th.theta0, c.fock_m);
    double contraction = 0.0;
    for (const auto& sym : {fock::matrix_unit_symbol(1, 2, fg, th2), gaussian(fg, 0.6, {0.5, 0.0})}) {
        const double before = fock::lp_norm(fock::represent(sym, table), 1.0);
        const double after = fock::lp_norm(fock::represent(calculus::fourier_multiplier(sym, phi), table), 1.0);
        contraction = std::max(contraction, after / before);
    }
    r.check("T_phi is an L1 contraction up to |F phi|_1", contraction <= 1.0 + 1e-6, contraction, 1.0);
    return r;
}

// W^{d,1} norm invariant under U(-t) . U(t) on the Fock reference grid
inline RunReport sobolev_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec fg = c.fock_grid();
    const double theta0 = c.theta0_for(c.n);
    const ThetaMatrix th = make_theta(2, theta0);
    const fock::DisplacementTable table(fg, theta0, c.fock_m);
    SymbolSpec spec = c.symbol;
    if (spec.family == "square" || spec.family == "zero" || spec.family == "lattice-delta") spec.family = "gaussian";
    const Symbol f = make_symbol(spec, fg, th);
    const auto base = fock::sobolev_norm(f, 2, 1.0, table);
    const std::vector<std::vector<int>> shifts = {{1, 0}, {0, 2}, {-3, 1}, {2, -2}, {4, 3}};
    double worst = 0.0, corner = 0.0;
    std::string detail = "|x|_{W^{2,1}} = " + format_double(base.full) + " (corner " + format_double(base.corner) + ")";
    for (const auto& t : shifts) {
        const auto v = fock::sobolev_norm(calculus::translate_conjugate(f, th, t), 2, 1.0, table);
        worst = std::max(worst, std::abs(v.full - base.full) / base.full);
        corner = std::max(corner, std::abs(v.corner - base.corner) / base.corner);
    }
    r.check_le("Sobolev W^{2,1} norm invariant under 5 lattice translations, M = " + std::to_string(c.fock_m), worst, 1e-3,
               detail + "; corner deviation " + sci(corner));
    r.timings.emplace_back("sobolev", sw.seconds());
    return r;
}

}  // namespace moyal::harness
