#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "moyal/core/error.hpp"
#include "moyal/core/theta.hpp"

namespace moyal {

enum class Boundary { torus, open_box };

inline const char* to_string(Boundary b) { return b == Boundary::torus ? "torus" : "open-box"; }

// Points u = spacing * (i - n/2), i = 0..n-1 per axis; flat index has axis 0 slowest.
struct GridSpec {
    int d = 2;
    int n = 64;
    double length = 16.0;
    Boundary boundary = Boundary::torus;

    double spacing() const { return length / n; }
    int half() const { return n / 2; }

    std::size_t points() const {
        std::size_t p = 1;
        for (int k = 0; k < d; ++k) p *= static_cast<std::size_t>(n);
        return p;
    }

    // per-axis offsets in [-n/2, n/2)
    void offsets(std::size_t flat, int* out) const {
        for (int k = d - 1; k >= 0; --k) {
            out[k] = static_cast<int>(flat % n) - half();
            flat /= n;
        }
    }

    std::size_t flat(const int* offs) const {
        std::size_t f = 0;
        for (int k = 0; k < d; ++k) f = f * n + static_cast<std::size_t>(offs[k] + half());
        return f;
    }

    // reduce an offset into [-n/2, n/2)
    int wrap(int off) const {
        int r = (off + half()) % n;
        if (r < 0) r += n;
        return r - half();
    }

    bool in_window(int off) const { return off >= -half() && off < half(); }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "d=" << d << " N=" << n << " L=" << length << " boundary=" << to_string(boundary);
        return os.str();
    }

    bool operator==(const GridSpec& o) const {
        return d == o.d && n == o.n && length == o.length && boundary == o.boundary;
    }
};

inline void validate(const GridSpec& g) {
    if (g.d <= 0 || g.d % 2 != 0) throw DimensionError("grid: d must be even and positive");
    if (g.n < 4 || g.n % 2 != 0) throw DomainError("grid: N must be even and at least 4");
    if (!(g.length > 0.0) || !std::isfinite(g.length)) throw DomainError("grid: L must be positive");
}

// flattened coordinates, points() x d, row-major
inline std::vector<double> coordinates(const GridSpec& g) {
    const std::size_t pts = g.points();
    std::vector<double> out(pts * g.d);
    std::vector<int> off(g.d);
    const double h = g.spacing();
    for (std::size_t i = 0; i < pts; ++i) {
        g.offsets(i, off.data());
        for (int k = 0; k < g.d; ++k) out[i * g.d + k] = h * off[k];
    }
    return out;
}

// theta0 * spacing * L / 2 in 2*pi*Z
inline bool phase_compatible(const GridSpec& g, const ThetaMatrix& th, double tol = 1e-9) {
    const double q = th.theta0 * g.spacing() * g.length / 2.0 / (2.0 * std::numbers::pi);
    return std::abs(q - std::round(q)) <= tol * std::max(1.0, std::abs(q)) && std::round(q) != 0.0;
}

inline double compatible_theta0(const GridSpec& g, int m = 1) {
    return 4.0 * std::numbers::pi * m / (g.spacing() * g.length);
}

inline double compatible_length(int n, double theta0, int m = 1) {
    return std::sqrt(4.0 * std::numbers::pi * m * n / theta0);
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw ConfigError("grid", std::string(what) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

inline void require_torus_compatible(const GridSpec& g, const ThetaMatrix& th, const char* what) {
    if (g.d != th.d) throw DimensionError(std::string(what) + ": theta dimension differs from grid dimension");
    if (g.boundary == Boundary::torus && !phase_compatible(g, th))
        throw DomainError(std::string(what) + ": torus mode requires theta0*spacing*L/2 in 2*pi*Z");
}

// integer lattice steps of a real vector t; throws when t is off the lattice
inline std::vector<int> lattice_steps(const GridSpec& g, const std::vector<double>& t, double tol = 1e-9) {
    if (static_cast<int>(t.size()) != g.d) throw DimensionError("lattice vector has wrong dimension");
    std::vector<int> steps(g.d);
    for (int k = 0; k < g.d; ++k) {
        const double q = t[k] / g.spacing();
        const double r = std::round(q);
        if (std::abs(q - r) > tol * std::max(1.0, std::abs(q)))
            throw AlignmentError("vector component " + std::to_string(t[k]) + " is not a multiple of the grid spacing");
        steps[k] = static_cast<int>(r);
    }
    return steps;
}

inline void require_in_box(const GridSpec& g, const std::vector<int>& steps) {
    if (static_cast<int>(steps.size()) != g.d) throw DimensionError("lattice vector has wrong dimension");
    for (int s : steps)
        if (s <= -g.n || s >= g.n) throw DomainError("lattice vector leaves the box");
}

}  // namespace moyal
