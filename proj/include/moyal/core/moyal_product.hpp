#pragma once

#include <complex>
#include <vector>

#include "moyal/core/operator.hpp"

namespace moyal {

// conj(f(-s)), the symbol of Op(f)^*
inline Symbol adjoint_symbol(const Symbol& f) {
    const GridSpec& g = f.grid;
    Symbol out = Symbol::zeros(g);
    std::vector<int> off(g.d);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        g.offsets(i, off.data());
        bool inside = true;
        for (int k = 0; k < g.d; ++k) {
            off[k] = -off[k];
            if (g.boundary == Boundary::torus) off[k] = g.wrap(off[k]);
            else if (!g.in_window(off[k])) inside = false;
        }
        if (inside) out.values[i] = std::conj(f.values[g.flat(off.data())]);
    }
    return out;
}

// (a * b)(w) = p Delta^d sum_s a(s) b(w - s) exp((i/2)<s, theta w>), so Op(a)Op(b) = Op(a * b) on the torus
inline Symbol twisted_product(const Symbol& a, const Symbol& b, const ThetaMatrix& th) {
    require_same_grid(a.grid, b.grid, "twisted_product");
    const GridSpec& g = a.grid;
    require_torus_compatible(g, th, "twisted_product");
    const std::size_t pts = g.points();
    const auto xs = coordinates(g);
    const double weight = quantization_prefactor(g.d) * std::pow(g.spacing(), g.d);
    const bool torus = g.boundary == Boundary::torus;

    Symbol out = Symbol::zeros(g);
    std::vector<int> ow(g.d), os(g.d), diff(g.d);
    std::vector<double> thw(g.d);
    for (std::size_t w = 0; w < pts; ++w) {
        g.offsets(w, ow.data());
        th.apply(&xs[w * g.d], thw.data());
        Complex acc(0.0, 0.0);
        for (std::size_t s = 0; s < pts; ++s) {
            if (a.values[s] == Complex(0.0, 0.0)) continue;
            g.offsets(s, os.data());
            bool inside = true;
            for (int k = 0; k < g.d; ++k) {
                int o = ow[k] - os[k];
                if (torus) o = g.wrap(o);
                else if (!g.in_window(o)) inside = false;
                diff[k] = o;
            }
            if (!inside) continue;
            double arg = 0.0;
            for (int k = 0; k < g.d; ++k) arg += xs[s * g.d + k] * thw[k];
            acc += a.values[s] * b.values[g.flat(diff.data())] * std::polar(1.0, 0.5 * arg);
        }
        out.values[w] = weight * acc;
    }
    return out;
}

// symbol of Op(y)^* Op(y)
inline Symbol moyal_square(const Symbol& y, const ThetaMatrix& th) { return twisted_product(adjoint_symbol(y), y, th); }

// same square through the dense product and inverse quantization (torus only)
inline Symbol moyal_square_dense(const Symbol& y, const ThetaMatrix& th) {
    const GridOperator op = quantize(y.grid, th, y);
    return dequantize(materialize_product(adjoint(op), op), th);
}

}  // namespace moyal
