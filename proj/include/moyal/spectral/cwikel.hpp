#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "moyal/core/linalg.hpp"
#include "moyal/core/operator.hpp"
#include "moyal/trace/spectrum.hpp"

namespace moyal::spectral {

enum class Variant { smooth, floor, power };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::smooth: return "smooth";
        case Variant::floor: return "floor";
        case Variant::power: return "power";
    }
    return "?";
}

// floor that treats lattice points within 1e-9 of an integer as that integer
inline double lattice_floor(double u) {
    const double r = std::round(u);
    return std::abs(u - r) < 1e-9 ? r : std::floor(u);
}

inline double variant_weight(Variant v, const double* u, int d) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
        const double c = v == Variant::floor ? lattice_floor(u[k]) : u[k];
        r2 += c * c;
    }
    const double e = v == Variant::power ? (d + 1) / 2.0 : d / 2.0;
    return std::pow(1.0 + r2, -e);
}

inline Eigen::VectorXd weights(const GridSpec& g, Variant v) {
    return multiplier_values(g, [&](const double* u) { return Complex(variant_weight(v, u, g.d), 0.0); }).real();
}

struct CwikelOperator {
    Symbol x_symbol;
    Variant variant = Variant::smooth;
    GridOperator matrix;
    std::optional<GridOperator> symmetrized;
};

// x (1 - Delta)^{-p} with the resolvent realized as a coordinate multiplier
inline GridOperator weighted(const GridOperator& x, Variant v) {
    const Eigen::VectorXd w = weights(x.grid, v);
    return {x.grid, x.matrix * w.asDiagonal(), "(" + x.label + ")" + to_string(v) + "(nabla)"};
}

inline CwikelOperator cwikel_operator(const Symbol& f, const ThetaMatrix& th, Variant v) {
    return {f, v, weighted(quantize(f.grid, th, f), v), std::nullopt};
}

// w^{1/2} x w^{1/2}
inline GridOperator symmetric_form(const GridOperator& x, Variant v) {
    const Eigen::VectorXd r = weights(x.grid, v).cwiseSqrt();
    GridOperator out{x.grid, r.asDiagonal() * x.matrix * r.asDiagonal(), "sym(" + x.label + ")"};
    // exact Hermitian part; the input is Hermitian up to rounding
    out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
    return out;
}

// eigenvalues of a Hermitian operator (descending magnitude) or singular values otherwise
inline trace::SingularSpectrum singular_spectrum(const Eigen::MatrixXcd& a, const std::string& source = "") {
    if (linalg::is_hermitian(a)) {
        const Eigen::VectorXd w = linalg::hermitian_eigenvalues(a);
        return trace::from_eigenvalues(std::vector<double>(w.data(), w.data() + w.size()), source);
    }
    const Eigen::VectorXd s = linalg::singular_values(a);
    return {std::vector<double>(s.data(), s.data() + s.size()), {}, source};
}

inline trace::SingularSpectrum singular_spectrum(const GridOperator& a) { return singular_spectrum(a.matrix, a.label); }

// plain singular values even for Hermitian input
inline trace::SingularSpectrum singular_values_of(const Eigen::MatrixXcd& a, const std::string& source = "") {
    const Eigen::VectorXd s = linalg::singular_values(a);
    return {std::vector<double>(s.data(), s.data() + s.size()), {}, source};
}

struct Symmetrized {
    GridOperator op;
    trace::SingularSpectrum spectrum;
    double spectral_floor = 0.0;
};

// w^{1/2} Op(f) w^{1/2}; rejects non-Hermitian input and, when asked, a spectrum floor below -1e-8
inline Symmetrized symmetrize(CwikelOperator& c, const ThetaMatrix& th, bool verify_positive = true) {
    const GridOperator x = quantize(c.x_symbol.grid, th, c.x_symbol);
    if (!linalg::is_hermitian(x.matrix, 1e-10)) throw DomainError("symmetrize: Op(f) is not Hermitian");
    Symmetrized s{symmetric_form(x, c.variant), {}, 0.0};
    c.symmetrized = s.op;
    if (verify_positive) {
        s.spectrum = singular_spectrum(s.op.matrix, s.op.label);
        double lo = 0.0, hi = 0.0;
        for (double e : s.spectrum.eigenvalues) {
            lo = std::min(lo, e);
            hi = std::max(hi, std::abs(e));
        }
        s.spectral_floor = lo;
        if (lo < -1e-8 * std::max(1.0, hi))
            throw DomainError("symmetrize: operator is not positive (spectrum floor " + std::to_string(lo) + ")");
    }
    return s;
}

struct Correction {
    GridOperator op;
    double sup_k = 0.0;
};

// k(u) = (1+|u|^2)^{(d+1)/2} (g(u) - h(u))
inline double correction_function(const double* u, int d) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += u[k] * u[k];
    return std::pow(1.0 + r2, (d + 1) / 2.0) * (variant_weight(Variant::smooth, u, d) - variant_weight(Variant::floor, u, d));
}

// x (g - h)(nabla) assembled as x (1 - Delta)^{-(d+1)/2} k(nabla)
inline Correction correction_term(const Symbol& f, const ThetaMatrix& th) {
    const GridSpec& g = f.grid;
    const Eigen::VectorXd k = multiplier_values(g, [&](const double* u) { return Complex(correction_function(u, g.d), 0.0); }).real();
    const Eigen::VectorXd w = weights(g, Variant::power);
    const GridOperator x = quantize(g, th, f);
    Correction c{{g, x.matrix * w.cwiseProduct(k).asDiagonal(), "(" + x.label + ")power(nabla)k(nabla)"}, 0.0};
    c.sup_k = k.size() ? k.cwiseAbs().maxCoeff() : 0.0;
    return c;
}

}  // namespace moyal::spectral
