#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "moyal/calculus/calculus.hpp"
#include "moyal/harness/report.hpp"
#include "moyal/harness/symbols.hpp"

namespace moyal::harness {

// group law, unitarity, coordinate commutators, nabla conjugation, quantization plumbing (torus)
inline RunReport algebra_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec g = c.grid();
    if (g.boundary != Boundary::torus) throw ConfigError("boundary", "the algebra suite runs in torus mode");
    const ThetaMatrix th = c.theta();
    const GridSpec gb{g.d, g.n, g.length, Boundary::open_box};
    std::mt19937_64 rng(c.seed);
    const std::string where = " (" + g.describe() + ")";

    double comm = 0.0, unit = 0.0, vec = 0.0;
    MaskedMax dk_torus;
    double dk_box = 0.0, nab = 0.0;
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 6; ++trial) {
        const auto t = random_steps(rng, g), s = random_steps(rng, g);
        std::vector<int> ts(g.d);
        for (int k = 0; k < g.d; ++k) ts[k] = t[k] + s[k];
        const ShiftAction ut = shift_action(g, th, t);
        const GridOperator us = twisted_shift(g, th, s);
        const auto tv = positions(g, t), sv = positions(g, s);
        const Complex ph = std::polar(1.0, -0.5 * th.pairing(tv.data(), sv.data()));
        comm = std::max(comm, max_abs(twisted_shift(g, th, ts).matrix - ph * left_apply(ut, us.matrix)));

        const Eigen::MatrixXcd uu = right_apply(us.matrix.adjoint(), shift_action(g, th, s));
        unit = std::max(unit, max_abs(uu - Eigen::MatrixXcd::Identity(uu.rows(), uu.cols())));
        Eigen::VectorXcd xi(us.dim());
        for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = Complex(normal(rng), normal(rng));
        vec = std::max(vec, std::abs((us.matrix * xi).norm() - xi.norm()) / xi.norm());

        const GridOperator ub = twisted_shift(gb, th, s);
        for (int k = 0; k < g.d; ++k) {
            dk_box = std::max(dk_box, max_abs(calculus::commutator_derivative(ub, k).matrix - sv[k] * ub.matrix));
            const MaskedMax m = masked_max(g, calculus::commutator_derivative(us, k).matrix - sv[k] * us.matrix);
            dk_torus.seam_free = std::max(dk_torus.seam_free, m.seam_free);
            dk_torus.full = std::max(dk_torus.full, m.full);
        }

        std::uniform_int_distribution<int> small(-3, 3);
        std::vector<double> tn(g.d);
        for (auto& v : tn) v = 2.0 * std::numbers::pi / g.length * small(rng);
        double ts_dot = 0.0;
        for (int k = 0; k < g.d; ++k) ts_dot += tn[k] * sv[k];
        nab = std::max(nab, max_abs(calculus::nabla_conjugate(us, tn).matrix - std::polar(1.0, ts_dot) * us.matrix));
    }
    r.check_le("commutation relation U(t+s) = e^{-(i/2)<t,theta s>} U(t)U(s)" + where, comm, 1e-12);
    r.check_le("unitarity U(t)^* U(t) = 1" + where, unit, 1e-12, "vector norm deviation " + sci(vec));
    r.check_le("unitarity |U(t) xi| = |xi|" + where, vec, 1e-12);
    r.check_le("[D_k, U(s)] = s_k U(s), open box", dk_box, 1e-12);
    r.check_le("[D_k, U(s)] = s_k U(s), torus entries off the seam", dk_torus.seam_free, 1e-12,
               "full torus residual " + sci(dk_torus.full) + " comes from wrapped entries");
    r.check_le("e^{i<t,nabla>} U(s) e^{-i<t,nabla>} = e^{i<t,s>} U(s)" + where, nab, 1e-12);

    const auto s0 = random_steps(rng, g);
    r.check_le("Op(lattice delta) = U(s0)" + where,
               max_abs(quantize(g, th, lattice_delta(g, s0)).matrix - twisted_shift(g, th, s0).matrix), 1e-12);

    const Symbol f = Symbol::sample(g, [](const double* s) {
        const double r2 = (s[0] - 0.7) * (s[0] - 0.7) + (s[1] + 0.4) * (s[1] + 0.4);
        return std::exp(-0.5 * r2) * Complex(1.0, 0.5 * s[0]);
    });
    const Symbol h = gaussian(g, 0.8, std::vector<double>(g.d, 0.3));
    const GridOperator xf = quantize(g, th, f), xh = quantize(g, th, h);
    r.check_le("Op(f)^* = Op(f~)" + where, max_abs(adjoint(xf).matrix - quantize(g, th, adjoint_symbol(f)).matrix), 1e-12);
    const Complex a(2.0, 0.0), b(0.0, -3.0);
    r.check_le("Op linear" + where, max_abs(quantize(g, th, a * f + b * h).matrix - (a * xf.matrix + b * xh.matrix)), 1e-12);
    const Symbol back = dequantize(xf, th);
    double rt = 0.0, top = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        rt = std::max(rt, std::abs(back.values[i] - f.values[i]));
        top = std::max(top, std::abs(f.values[i]));
    }
    r.check_le("dequantize(Op(f)) = f" + where, rt / top, 1e-12);
    r.timings.emplace_back("algebra", sw.seconds());
    return r;
}

// ||Op f||_2 = ||f||_2 after the HS calibration constant
inline RunReport l2_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec g = c.grid();
    const ThetaMatrix th = c.theta();
    const double sigma = c.symbol.sigma;
    const Symbol f = gaussian(g, sigma);
    const double hs = quantize(g, th, f).matrix.norm() * hs_calibration(g);
    const double quad = f.l2_norm();
    const double exact = std::pow(std::numbers::pi * sigma * sigma, g.d / 4.0);
    r.check_le("L2 isometry |Op f|_HS = |f|_2 (quadrature), " + g.describe(), std::abs(hs - quad) / quad, 1e-6,
               "|Op f|_HS * c = " + format_double(hs) + ", c = " + format_double(hs_calibration(g)));
    r.check_le("L2 isometry against the closed-form Gaussian norm, " + g.describe(), std::abs(hs - exact) / exact, 1e-6,
               "(pi sigma^2)^{d/4} = " + format_double(exact));
    if (g.boundary == Boundary::torus) {
        std::vector<int> s0(g.d, 1);
        const Symbol dl = lattice_delta(g, s0);
        const double hd = twisted_shift(g, th, s0).matrix.norm() * hs_calibration(g);
        r.check_le("L2 isometry on a lattice delta", std::abs(hd - dl.l2_norm()) / dl.l2_norm(), 1e-12);
    }
    r.timings.emplace_back("l2", sw.seconds());
    return r;
}

struct UnitErrors {
    double unit = 0.0, product = 0.0, adjoint = 0.0, trace = 0.0;
    double max() const { return std::max({unit, product, adjoint, trace}); }
};

inline UnitErrors matrix_unit_errors(const std::vector<std::vector<Symbol>>& units, const fock::DisplacementTable& table) {
    const int n = static_cast<int>(units.size());
    std::vector<std::vector<Eigen::MatrixXcd>> rep(n, std::vector<Eigen::MatrixXcd>(n));
    UnitErrors e;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            rep[k][l] = fock::represent(units[k][l], table).matrix;
            Eigen::MatrixXcd ekl = Eigen::MatrixXcd::Zero(table.m(), table.m());
            ekl(k, l) = 1.0;
            e.unit = std::max(e.unit, max_abs(rep[k][l] - ekl));
            e.trace = std::max(e.trace, std::abs(rep[k][l].trace() - Complex(k == l ? 1.0 : 0.0, 0.0)));
        }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            e.adjoint = std::max(e.adjoint, max_abs(rep[k][l].adjoint() - rep[l][k]));
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    Eigen::MatrixXcd prod = rep[k][l] * rep[p][q];
                    if (l == p) prod -= rep[k][q];
                    e.product = std::max(e.product, max_abs(prod));
                }
        }
    return e;
}

// matrix units, trace calibration and the L2 bridge on the Fock reference grid
inline RunReport fock_suite(const ExperimentConfig& c) {
    RunReport r;
    Stopwatch sw;
    const GridSpec fg = c.fock_grid();
    const double theta0 = c.theta0_for(c.n);
    const ThetaMatrix th = make_theta(2, theta0);
    const int kmax = 3;
    std::vector<std::vector<Symbol>> units(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= kmax; ++l) units[k].push_back(fock::matrix_unit_symbol(k, l, fg, th));

    const int m_lo = c.fock_m / 2, m_hi = c.fock_m;
    const UnitErrors lo = matrix_unit_errors(units, fock::DisplacementTable(fg, theta0, m_lo));
    const fock::DisplacementTable table(fg, theta0, m_hi);
    const UnitErrors hi = matrix_unit_errors(units, table);
    auto detail = [](const UnitErrors& e) {
        return "unit " + sci(e.unit) + ", product " + sci(e.product) + ", adjoint " + sci(e.adjoint) + ", trace " + sci(e.trace);
    };
    r.check_le("matrix units k,l <= 3 at M = " + std::to_string(m_lo), lo.max(), 1e-3, detail(lo));
    r.check("matrix unit error does not grow from M = " + std::to_string(m_lo) + " to " + std::to_string(m_hi),
            hi.max() <= lo.max() * (1.0 + 1e-6) + 1e-12, hi.max(), lo.max(), detail(hi));

    const auto cal = fock::calibrate_trace(table, th);
    r.check_le("trace calibration tau(Op f) / f(0) matches the prefactor", std::abs(cal.fitted - cal.predicted) / cal.predicted, 1e-6,
               "fitted " + format_double(cal.fitted) + ", predicted " + format_double(cal.predicted) + ", truncation " + sci(cal.truncation_error));
    if (std::abs(cal.predicted - 1.0) > 0.05)
        r.warnings.push_back("tau(Op f) = " + format_double(cal.predicted) + " f(0) under the (2 pi)^{-d/4} prefactor; traces are reported in the calibrated normalization");

    const Symbol f2 = gaussian(fg, 0.7, {0.3, -0.2});
    const double f20 = std::exp(-(0.09 + 0.04) / (2 * 0.49));
    const double ratio = fock::trace_tau(fock::represent(f2, table)).real() / (cal.fitted * f20);
    r.check_le("calibrated trace reproduces f(0) for a second symbol", ratio - 1.0, 0.05, "ratio " + format_double(ratio));

    const Symbol f = gaussian(fg, 1.0);
    const double l2 = fock::lp_norm(fock::represent(f, table), 2.0);
    const double expect = quantization_prefactor(2) * std::sqrt(2.0 * std::numbers::pi / theta0) * f.l2_norm();
    r.check_le("|r(Op f)|_2 = p sqrt(2 pi / theta0) |f|_2", std::abs(l2 - expect) / expect, 1e-6);
    r.timings.emplace_back("fock", sw.seconds());
    return r;
}

}  // namespace moyal::harness
