#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "moyal/calculus/derivative.hpp"
#include "moyal/core/operator.hpp"

namespace moyal::calculus {

// symbol of U(-t) Op(f) U(t): e^{i<s, theta t>} f(s)
inline Symbol translate_conjugate(const Symbol& f, const ThetaMatrix& th, const std::vector<int>& steps) {
    const GridSpec& g = f.grid;
    require_in_box(g, steps);
    std::vector<double> t(g.d);
    for (int k = 0; k < g.d; ++k) t[k] = g.spacing() * steps[k];
    std::vector<double> tht(g.d);
    th.apply(t.data(), tht.data());
    return fourier_multiplier(f, [&](const double* s) {
        double a = 0.0;
        for (int k = 0; k < g.d; ++k) a += s[k] * tht[k];
        return std::polar(1.0, a);
    });
}

// same symbol through the dense conjugation and inverse quantization (torus only)
inline Symbol translate_conjugate_dense(const Symbol& f, const ThetaMatrix& th, const std::vector<int>& steps) {
    return dequantize(shift_conjugate(quantize(f.grid, th, f), th, steps), th);
}

// e^{i<t,nabla>} x e^{-i<t,nabla>}
inline GridOperator nabla_conjugate(const GridOperator& x, const std::vector<double>& t) {
    const GridSpec& g = x.grid;
    if (static_cast<int>(t.size()) != g.d) throw DimensionError("nabla_conjugate: t has wrong dimension");
    const Eigen::VectorXcd e = multiplier_values(g, [&](const double* u) {
        double a = 0.0;
        for (int k = 0; k < g.d; ++k) a += t[k] * u[k];
        return std::polar(1.0, a);
    });
    GridOperator out{g, e.asDiagonal() * x.matrix * e.conjugate().asDiagonal(), "e^{i<t,nabla>}(" + x.label + ")e^{-i<t,nabla>}"};
    return out;
}

// [D_k, x] entrywise: (u_k - v_k) x[u, v]
inline GridOperator commutator_derivative(const GridOperator& x, int axis) {
    const GridSpec& g = x.grid;
    if (axis < 0 || axis >= g.d) throw DimensionError("commutator_derivative: axis out of range");
    const auto xs = coordinates(g);
    const Eigen::Index n = x.matrix.rows();
    GridOperator out{g, Eigen::MatrixXcd(n, n), "[D_" + std::to_string(axis) + ", " + x.label + "]"};
    for (Eigen::Index v = 0; v < n; ++v)
        for (Eigen::Index u = 0; u < n; ++u) out.matrix(u, v) = (xs[u * g.d + axis] - xs[v * g.d + axis]) * x.matrix(u, v);
    return out;
}

// iterated commutators, innermost first
inline GridOperator derivative_dense(const GridOperator& x, const MultiIndex& alpha) {
    validate(alpha, x.grid.d);
    GridOperator out = x;
    for (auto it = alpha.axes.rbegin(); it != alpha.axes.rend(); ++it) out = commutator_derivative(out, *it);
    return out;
}

struct AverageResult {
    GridOperator value;
    double halving_difference = 0.0;
    bool accuracy_warning = false;
    std::size_t nodes = 0;
};

// sum_a w F(theta a) U(-a) x U(a) over lattice a with |theta a| <= radius, w = |det theta| Delta^d
template <class Ft>
GridOperator conjugation_sum(const GridOperator& x, const ThetaMatrix& th, Ft&& fphi, double radius, int stride,
                             std::size_t* nodes = nullptr) {
    const GridSpec& g = x.grid;
    const double h = g.spacing() * stride;
    const double w = std::pow(th.theta0, g.d) * std::pow(h, g.d);
    std::vector<double> a(g.d), u(g.d);
    std::vector<int> off(g.d), steps(g.d);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(x.matrix.rows(), x.matrix.cols());
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.points(); ++i) {
        g.offsets(i, off.data());
        bool on = true;
        for (int k = 0; k < g.d; ++k) {
            if (off[k] % stride != 0) on = false;
            a[k] = g.spacing() * off[k];
        }
        if (!on) continue;
        th.apply(a.data(), u.data());
        double r2 = 0.0;
        for (int k = 0; k < g.d; ++k) r2 += u[k] * u[k];
        if (r2 > radius * radius) continue;
        const Complex c = fphi(u.data()) * w;
        acc += c * shift_conjugate(x, th, off).matrix;
        ++count;
    }
    if (nodes) *nodes = count;
    return {g, std::move(acc), "T_phi(" + x.label + ")"};
}

// T_phi x = int F(u) U(-theta^{-1}u) x U(theta^{-1}u) du on the lattice theta (Delta Z^d); halving test with stride 2
template <class Ft>
AverageResult conjugation_average(const GridOperator& x, const ThetaMatrix& th, Ft&& fphi, double radius = 6.0, double warn_tol = 1e-3) {
    require_torus_compatible(x.grid, th, "conjugation_average");
    AverageResult r;
    r.value = conjugation_sum(x, th, fphi, radius, 1, &r.nodes);
    const GridOperator coarse = conjugation_sum(x, th, fphi, radius, 2);
    const double norm = r.value.matrix.norm();
    r.halving_difference = norm > 0.0 ? (r.value.matrix - coarse.matrix).norm() / norm : 0.0;
    r.accuracy_warning = r.halving_difference > warn_tol;
    return r;
}

// Fourier transform of the Gaussian e^{-|s|^2/2}: (2 pi)^{-d/2} e^{-|u|^2/2}
inline auto gaussian_transform(int d) {
    return [d](const double* u) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) r2 += u[k] * u[k];
        return Complex(std::pow(2.0 * std::numbers::pi, -d / 2.0) * std::exp(-0.5 * r2), 0.0);
    };
}

inline auto gaussian_weight(int d) {
    return [d](const double* s) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) r2 += s[k] * s[k];
        return Complex(std::exp(-0.5 * r2), 0.0);
    };
}

// Gaussian averaging operator T
inline AverageResult gaussian_average(const GridOperator& x, const ThetaMatrix& th, double radius = 6.0) {
    return conjugation_average(x, th, gaussian_transform(x.grid.d), radius);
}

}  // namespace moyal::calculus
