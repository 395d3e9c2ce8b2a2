#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <vector>

#include "moyal/core/grid.hpp"

namespace moyal {

using Complex = std::complex<double>;

struct Symbol {
    GridSpec grid;
    std::vector<Complex> values;

    static Symbol zeros(const GridSpec& g) {
        validate(g);
        return Symbol{g, std::vector<Complex>(g.points(), Complex(0.0, 0.0))};
    }

    // fn(const double* s) -> Complex
    template <class Fn>
    static Symbol sample(const GridSpec& g, Fn&& fn) {
        Symbol f = zeros(g);
        const auto xs = coordinates(g);
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const Complex v = fn(&xs[i * g.d]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DomainError("symbol: non-finite sample");
            f.values[i] = v;
        }
        return f;
    }

    Complex at(const int* offs) const { return values[grid.flat(offs)]; }

    double l2_norm() const {
        double acc = 0.0;
        for (const auto& v : values) acc += std::norm(v);
        return std::sqrt(acc * std::pow(grid.spacing(), grid.d));
    }

    // FNV-1a over grid parameters and raw sample bytes
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](const void* p, std::size_t n) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (std::size_t i = 0; i < n; ++i) {
                h ^= b[i];
                h *= 1099511628211ULL;
            }
        };
        mix(&grid.d, sizeof grid.d);
        mix(&grid.n, sizeof grid.n);
        mix(&grid.length, sizeof grid.length);
        const int b = grid.boundary == Boundary::torus ? 0 : 1;
        mix(&b, sizeof b);
        mix(values.data(), values.size() * sizeof(Complex));
        return h;
    }

    Symbol& operator+=(const Symbol& o) {
        require_same_grid(grid, o.grid, "symbol sum");
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }

    Symbol& operator-=(const Symbol& o) {
        require_same_grid(grid, o.grid, "symbol difference");
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }

    Symbol& operator*=(Complex c) {
        for (auto& v : values) v *= c;
        return *this;
    }
};

inline Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
inline Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
inline Symbol operator*(Complex c, Symbol a) { return a *= c; }

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xf];
    return s;
}

// Op(prefactor) weight: (2 pi)^{-d/4}
inline double quantization_prefactor(int d) { return std::pow(2.0 * std::numbers::pi, -d / 4.0); }

// Delta^{-d} (2 pi)^{d/4} at s0, so that Op(f) = U(s0)
inline Symbol lattice_delta(const GridSpec& g, const std::vector<int>& steps) {
    Symbol f = Symbol::zeros(g);
    if (static_cast<int>(steps.size()) != g.d) throw DimensionError("lattice_delta: wrong dimension");
    std::vector<int> offs(steps);
    for (auto& o : offs) {
        if (g.boundary == Boundary::torus) o = g.wrap(o);
        else if (!g.in_window(o)) throw DomainError("lattice_delta: point outside the symbol window");
    }
    f.values[g.flat(offs.data())] = 1.0 / (std::pow(g.spacing(), g.d) * quantization_prefactor(g.d));
    return f;
}

inline Symbol gaussian(const GridSpec& g, double sigma, std::vector<double> center = {}) {
    if (!(sigma > 0.0)) throw DomainError("gaussian: sigma must be positive");
    if (center.empty()) center.assign(g.d, 0.0);
    if (static_cast<int>(center.size()) != g.d) throw DimensionError("gaussian: center has wrong dimension");
    return Symbol::sample(g, [&](const double* s) {
        double r2 = 0.0;
        for (int k = 0; k < g.d; ++k) r2 += (s[k] - center[k]) * (s[k] - center[k]);
        return Complex(std::exp(-r2 / (2.0 * sigma * sigma)), 0.0);
    });
}

// exp(1 - 1/(1 - |s|^2/R^2)) inside the ball of radius R
inline Symbol radial_bump(const GridSpec& g, double radius) {
    if (!(radius > 0.0)) throw DomainError("radial_bump: radius must be positive");
    return Symbol::sample(g, [&](const double* s) {
        double r2 = 0.0;
        for (int k = 0; k < g.d; ++k) r2 += s[k] * s[k];
        r2 /= radius * radius;
        return Complex(r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0, 0.0);
    });
}

// product of one-dimensional bumps, supported in [-1, 1]^d
inline Symbol product_bump(const GridSpec& g) {
    return Symbol::sample(g, [&](const double* s) {
        double v = 1.0;
        for (int k = 0; k < g.d; ++k) {
            const double x2 = s[k] * s[k];
            v *= x2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x2)) : 0.0;
        }
        return Complex(v, 0.0);
    });
}

}  // namespace moyal
