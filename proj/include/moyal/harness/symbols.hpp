#pragma once

#include <random>
#include <string>
#include <vector>

#include "moyal/core/moyal_product.hpp"
#include "moyal/fock/fock.hpp"
#include "moyal/harness/config.hpp"

namespace moyal::harness {

inline Symbol make_family(const std::string& family, const SymbolSpec& s, const GridSpec& g, const ThetaMatrix& th) {
    if (family == "gaussian") return gaussian(g, s.sigma, s.center);
    if (family == "matrix-unit") return fock::matrix_unit_symbol(s.k, s.l, g, th);
    if (family == "lattice-delta") return lattice_delta(g, s.s0);
    if (family == "bump") return radial_bump(g, s.radius);
    if (family == "product-bump") return product_bump(g);
    if (family == "zero") return Symbol::zeros(g);
    if (family == "square") return moyal_square(make_family(s.of, s, g, th), th);
    throw ConfigError("symbol", "unknown family '" + family + "'");
}

// configured symbol including its scale
inline Symbol make_symbol(const SymbolSpec& s, const GridSpec& g, const ThetaMatrix& th) {
    Symbol f = make_family(s.family, s, g, th);
    if (s.scale != 1.0) f *= s.scale;
    return f;
}

inline std::vector<double> positions(const GridSpec& g, const std::vector<int>& steps) {
    std::vector<double> t(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) t[k] = g.spacing() * steps[k];
    return t;
}

inline std::vector<int> random_steps(std::mt19937_64& rng, const GridSpec& g, int radius = -1) {
    const int lo = radius < 0 ? -g.half() : -radius, hi = radius < 0 ? g.half() - 1 : radius;
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<int> s(g.d);
    for (auto& v : s) v = dist(rng);
    return s;
}

// largest entry of diff over entries whose offset difference needs no wrap, and over all entries
struct MaskedMax {
    double seam_free = 0.0;
    double full = 0.0;
};

inline MaskedMax masked_max(const GridSpec& g, const Eigen::MatrixXcd& diff) {
    MaskedMax m;
    std::vector<int> ou(g.d), ov(g.d);
    for (Eigen::Index v = 0; v < diff.cols(); ++v) {
        g.offsets(static_cast<std::size_t>(v), ov.data());
        for (Eigen::Index u = 0; u < diff.rows(); ++u) {
            const double a = std::abs(diff(u, v));
            m.full = std::max(m.full, a);
            if (a <= m.seam_free) continue;
            g.offsets(static_cast<std::size_t>(u), ou.data());
            bool inside = true;
            for (int k = 0; k < g.d; ++k) inside = inside && g.in_window(ou[k] - ov[k]);
            if (inside) m.seam_free = a;
        }
    }
    return m;
}

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace moyal::harness
