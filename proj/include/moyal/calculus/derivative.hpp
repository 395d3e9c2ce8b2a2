#pragma once

#include <string>
#include <vector>

#include "moyal/core/symbol.hpp"

namespace moyal::calculus {

// Ordered sequence of axes (0-based); order() = number of factors.
struct MultiIndex {
    std::vector<int> axes;

    std::size_t order() const { return axes.size(); }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < axes.size(); ++i) s += (i ? "," : "") + std::to_string(axes[i]);
        return s + ")";
    }
};

inline void validate(const MultiIndex& alpha, int d) {
    if (static_cast<int>(alpha.order()) > 2 * d + 2) throw DomainError("multi-index: order exceeds 2d+2");
    for (int a : alpha.axes)
        if (a < 0 || a >= d) throw DimensionError("multi-index: axis out of range");
}

// all ordered sequences of length <= m over d axes
inline std::vector<MultiIndex> multi_indices_up_to(int d, int m) {
    std::vector<MultiIndex> out{MultiIndex{}};
    std::size_t begin = 0;
    for (int len = 1; len <= m; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int k = 0; k < d; ++k) {
                MultiIndex next = out[i];
                next.axes.push_back(k);
                out.push_back(next);
            }
        begin = end;
    }
    return out;
}

// s -> s^alpha f(s)
inline Symbol derivative_symbol(const Symbol& f, const MultiIndex& alpha) {
    const GridSpec& g = f.grid;
    validate(alpha, g.d);
    Symbol out = f;
    if (alpha.axes.empty()) return out;
    std::vector<int> off(g.d);
    const double h = g.spacing();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        g.offsets(i, off.data());
        double w = 1.0;
        for (int a : alpha.axes) w *= h * off[a];
        out.values[i] *= w;
    }
    return out;
}

// s -> phi(s) f(s); phi(const double* s) -> Complex
template <class Fn>
Symbol fourier_multiplier(const Symbol& f, Fn&& phi) {
    const GridSpec& g = f.grid;
    Symbol out = f;
    const auto xs = coordinates(g);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const Complex v = phi(&xs[i * g.d]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("fourier_multiplier: non-finite value");
        out.values[i] *= v;
    }
    return out;
}

}  // namespace moyal::calculus
