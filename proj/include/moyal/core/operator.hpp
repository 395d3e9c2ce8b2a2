#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moyal/core/grid.hpp"
#include "moyal/core/symbol.hpp"
#include "moyal/core/theta.hpp"

namespace moyal {

struct GridOperator {
    GridSpec grid;
    Eigen::MatrixXcd matrix;
    std::string label;

    Eigen::Index dim() const { return matrix.rows(); }
};

// Monomial action of U(t): row u reads column source[u] (or nothing when -1) times phase[u].
// (U(t) xi)(u) = e^{(i/2)<t, theta u>} xi(u - t), so that U(t)U(s) = e^{(i/2)<t, theta s>} U(t+s).
struct ShiftAction {
    std::vector<std::int64_t> source;
    std::vector<Complex> phase;
};

inline ShiftAction shift_action(const GridSpec& g, const ThetaMatrix& th, const std::vector<int>& steps) {
    validate(g);
    require_torus_compatible(g, th, "twisted_shift");
    require_in_box(g, steps);
    const std::size_t pts = g.points();
    const double h = g.spacing();
    std::vector<double> t(g.d), u(g.d);
    for (int k = 0; k < g.d; ++k) t[k] = h * steps[k];

    ShiftAction a;
    a.source.resize(pts);
    a.phase.resize(pts);
    std::vector<int> off(g.d), src(g.d);
    for (std::size_t i = 0; i < pts; ++i) {
        g.offsets(i, off.data());
        bool inside = true;
        for (int k = 0; k < g.d; ++k) {
            u[k] = h * off[k];
            int o = off[k] - steps[k];
            if (g.boundary == Boundary::torus) o = g.wrap(o);
            else if (!g.in_window(o)) inside = false;
            src[k] = o;
        }
        a.phase[i] = std::polar(1.0, 0.5 * th.pairing(t.data(), u.data()));
        a.source[i] = inside ? static_cast<std::int64_t>(g.flat(src.data())) : -1;
    }
    return a;
}

inline GridOperator twisted_shift(const GridSpec& g, const ThetaMatrix& th, const std::vector<int>& steps) {
    const ShiftAction a = shift_action(g, th, steps);
    const auto pts = static_cast<Eigen::Index>(g.points());
    GridOperator op{g, Eigen::MatrixXcd::Zero(pts, pts), "U(t)"};
    for (Eigen::Index i = 0; i < pts; ++i)
        if (a.source[i] >= 0) op.matrix(i, a.source[i]) = a.phase[i];
    return op;
}

inline GridOperator twisted_shift(const GridSpec& g, const ThetaMatrix& th, const std::vector<double>& t) {
    return twisted_shift(g, th, lattice_steps(g, t));
}

// A X for monomial A
inline Eigen::MatrixXcd left_apply(const ShiftAction& a, const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (a.source[i] >= 0) out(i, j) = a.phase[i] * x(a.source[i], j);
    return out;
}

// X A for monomial A
inline Eigen::MatrixXcd right_apply(const Eigen::MatrixXcd& x, const ShiftAction& a) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
    for (Eigen::Index b = 0; b < x.cols(); ++b)
        if (a.source[b] >= 0) out.col(a.source[b]) += a.phase[b] * x.col(b);
    return out;
}

// U(-t) X U(t)
inline GridOperator shift_conjugate(const GridOperator& x, const ThetaMatrix& th, const std::vector<int>& steps) {
    std::vector<int> neg(steps);
    for (auto& s : neg) s = -s;
    const ShiftAction fwd = shift_action(x.grid, th, steps);
    const ShiftAction bwd = shift_action(x.grid, th, neg);
    return {x.grid, left_apply(bwd, right_apply(x.matrix, fwd)), "U(-t)(" + x.label + ")U(t)"};
}

inline double hs_calibration(const GridSpec& g) {
    return std::pow(2.0 * std::numbers::pi, g.d / 4.0) / std::pow(g.length, g.d / 2.0);
}

inline GridOperator quantize(const GridSpec& g, const ThetaMatrix& th, const Symbol& f) {
    validate(g);
    require_same_grid(g, f.grid, "quantize");
    require_torus_compatible(g, th, "quantize");
    const std::size_t pts = g.points();
    const auto xs = coordinates(g);
    const Complex weight = quantization_prefactor(g.d) * std::pow(g.spacing(), g.d);
    const bool torus = g.boundary == Boundary::torus;

    GridOperator op{g, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pts), static_cast<Eigen::Index>(pts)), ""};
    std::vector<int> ou(g.d), ov(g.d), diff(g.d);
    std::vector<double> thv(g.d);
    for (std::size_t v = 0; v < pts; ++v) {
        g.offsets(v, ov.data());
        th.apply(&xs[v * g.d], thv.data());
        for (std::size_t u = 0; u < pts; ++u) {
            g.offsets(u, ou.data());
            bool inside = true;
            for (int k = 0; k < g.d; ++k) {
                int o = ou[k] - ov[k];
                if (torus) o = g.wrap(o);
                else if (!g.in_window(o)) inside = false;
                diff[k] = o;
            }
            if (!inside) continue;
            const Complex fv = f.values[g.flat(diff.data())];
            if (fv == Complex(0.0, 0.0)) continue;
            double arg = 0.0;
            for (int k = 0; k < g.d; ++k) arg += xs[u * g.d + k] * thv[k];
            op.matrix(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = weight * fv * std::polar(1.0, 0.5 * arg);
        }
    }
    std::ostringstream label;
    label.precision(17);
    label << "Op(f) symbol=" << hash_hex(f.hash()) << " prefactor=(2pi)^(-d/4) hs_calibration=" << hs_calibration(g);
    op.label = label.str();
    return op;
}

// diag(phi(u)); phi(const double* u) -> Complex
template <class Fn>
GridOperator multiplier(const GridSpec& g, Fn&& phi, std::string label = "phi(nabla)") {
    validate(g);
    const std::size_t pts = g.points();
    const auto xs = coordinates(g);
    GridOperator op{g, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pts), static_cast<Eigen::Index>(pts)), std::move(label)};
    for (std::size_t i = 0; i < pts; ++i) {
        const Complex v = phi(&xs[i * g.d]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("multiplier: non-finite value at a grid point");
        op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v;
    }
    return op;
}

template <class Fn>
Eigen::VectorXcd multiplier_values(const GridSpec& g, Fn&& phi) {
    const std::size_t pts = g.points();
    const auto xs = coordinates(g);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(pts));
    for (std::size_t i = 0; i < pts; ++i) {
        const Complex v = phi(&xs[i * g.d]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("multiplier: non-finite value at a grid point");
        out(static_cast<Eigen::Index>(i)) = v;
    }
    return out;
}

inline GridOperator materialize_product(const GridOperator& a, const GridOperator& b) {
    require_same_grid(a.grid, b.grid, "product");
    if (a.matrix.cols() != b.matrix.rows()) throw DimensionError("product: shape mismatch");
    GridOperator out{a.grid, Eigen::MatrixXcd(a.matrix.rows(), b.matrix.cols()), "(" + a.label + ")(" + b.label + ")"};
    out.matrix.noalias() = a.matrix * b.matrix;
    return out;
}

inline GridOperator adjoint(const GridOperator& a) {
    return {a.grid, a.matrix.adjoint(), "(" + a.label + ")^*"};
}

// f(s) = Tr(U(s)^* X) / (N^d p Delta^d); exact on the torus
inline Symbol dequantize(const GridOperator& x, const ThetaMatrix& th) {
    const GridSpec& g = x.grid;
    if (g.boundary != Boundary::torus) throw DomainError("dequantize: only exact in torus mode");
    require_torus_compatible(g, th, "dequantize");
    const std::size_t pts = g.points();
    const double scale = 1.0 / (static_cast<double>(pts) * quantization_prefactor(g.d) * std::pow(g.spacing(), g.d));
    Symbol f = Symbol::zeros(g);
    std::vector<int> off(g.d);
    for (std::size_t s = 0; s < pts; ++s) {
        g.offsets(s, off.data());
        const ShiftAction a = shift_action(g, th, off);
        Complex acc(0.0, 0.0);
        for (std::size_t u = 0; u < pts; ++u) acc += std::conj(a.phase[u]) * x.matrix(static_cast<Eigen::Index>(u), a.source[u]);
        f.values[s] = acc * scale;
    }
    return f;
}

// tau on the grid: Tr(X) (2 pi)^{d/2} / (|Pf theta| L^d)
inline Complex grid_trace(const GridOperator& x, const ThetaMatrix& th) {
    const double c = std::pow(2.0 * std::numbers::pi, x.grid.d / 2.0) / (th.abs_pfaffian() * std::pow(x.grid.length, x.grid.d));
    return x.matrix.trace() * c;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace moyal
