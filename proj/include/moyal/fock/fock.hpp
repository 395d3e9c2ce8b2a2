#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moyal/calculus/derivative.hpp"
#include "moyal/core/linalg.hpp"
#include "moyal/core/symbol.hpp"
#include "moyal/core/theta.hpp"
#include "moyal/fock/displacement.hpp"

namespace moyal::fock {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FockMatrix {
    int m = 0;
    Eigen::MatrixXcd matrix;
    double theta0 = 1.0;
    std::string provenance;
};

// full M x M value and the (M/2) x (M/2) corner value
template <class T>
struct Truncated {
    T full{};
    T corner{};
    double error() const { return std::abs(full - corner); }
};

inline void require_fock_theta(const ThetaMatrix& th) {
    if (th.d != 2) throw DimensionError("fock: the Hermite representation ships for d = 2 only");
}

// W(s) for every grid point s, each block M x M row-major
class DisplacementTable {
public:
    DisplacementTable() = default;

    DisplacementTable(const GridSpec& g, double theta0, int m) : grid_(g), theta0_(theta0), m_(m) {
        validate(g);
        if (g.d != 2) throw DimensionError("displacement table: d must be 2");
        if (m < 2) throw DomainError("displacement table: M must be at least 2");
        const std::size_t pts = g.points(), block = static_cast<std::size_t>(m) * m;
        data_.resize(pts * block);
        const auto xs = coordinates(g);
        for (std::size_t i = 0; i < pts; ++i) displacement_into(m, theta0, xs[2 * i], xs[2 * i + 1], &data_[i * block]);
    }

    int m() const { return m_; }
    double theta0() const { return theta0_; }
    const GridSpec& grid() const { return grid_; }
    const Complex* block(std::size_t point) const { return &data_[point * static_cast<std::size_t>(m_) * m_]; }

    static constexpr char magic[8] = {'M', 'O', 'Y', 'A', 'L', 'D', 'T', '\0'};
    static constexpr std::uint32_t version = 1;

    // header: magic, version, M, theta0, N, L, d, boundary; then row-major blocks
    void save(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot write displacement cache " + path);
        const std::int32_t mm = m_, n = grid_.n, d = grid_.d, b = grid_.boundary == Boundary::torus ? 0 : 1;
        os.write(magic, sizeof magic);
        os.write(reinterpret_cast<const char*>(&version), sizeof version);
        os.write(reinterpret_cast<const char*>(&mm), sizeof mm);
        os.write(reinterpret_cast<const char*>(&theta0_), sizeof theta0_);
        os.write(reinterpret_cast<const char*>(&n), sizeof n);
        os.write(reinterpret_cast<const char*>(&grid_.length), sizeof grid_.length);
        os.write(reinterpret_cast<const char*>(&d), sizeof d);
        os.write(reinterpret_cast<const char*>(&b), sizeof b);
        os.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size() * sizeof(Complex)));
        if (!os) throw IoError("short write to displacement cache " + path);
    }

    static DisplacementTable load(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open displacement cache " + path);
        char mg[8];
        std::uint32_t ver = 0;
        std::int32_t mm = 0, n = 0, d = 0, b = 0;
        DisplacementTable t;
        is.read(mg, sizeof mg);
        is.read(reinterpret_cast<char*>(&ver), sizeof ver);
        is.read(reinterpret_cast<char*>(&mm), sizeof mm);
        is.read(reinterpret_cast<char*>(&t.theta0_), sizeof t.theta0_);
        is.read(reinterpret_cast<char*>(&n), sizeof n);
        is.read(reinterpret_cast<char*>(&t.grid_.length), sizeof t.grid_.length);
        is.read(reinterpret_cast<char*>(&d), sizeof d);
        is.read(reinterpret_cast<char*>(&b), sizeof b);
        if (!is || std::memcmp(mg, magic, sizeof mg) != 0 || ver != version)
            throw IoError("displacement cache " + path + " has a bad header");
        t.m_ = mm;
        t.grid_.n = n;
        t.grid_.d = d;
        t.grid_.boundary = b == 0 ? Boundary::torus : Boundary::open_box;
        validate(t.grid_);
        t.data_.resize(t.grid_.points() * static_cast<std::size_t>(mm) * mm);
        is.read(reinterpret_cast<char*>(t.data_.data()), static_cast<std::streamsize>(t.data_.size() * sizeof(Complex)));
        if (!is) throw IoError("displacement cache " + path + " is truncated");
        return t;
    }

    // cached table when the key matches, otherwise rebuild and store
    static DisplacementTable cached(const std::string& path, const GridSpec& g, double theta0, int m) {
        try {
            DisplacementTable t = load(path);
            if (t.grid_ == g && t.theta0_ == theta0 && t.m_ == m) return t;
        } catch (const IoError&) {
        }
        DisplacementTable t(g, theta0, m);
        t.save(path);
        return t;
    }

private:
    GridSpec grid_;
    double theta0_ = 1.0;
    int m_ = 0;
    std::vector<Complex> data_;
};

// p Delta^2 sum_s f(s) W(s)
inline FockMatrix represent(const Symbol& f, const DisplacementTable& table) {
    require_same_grid(f.grid, table.grid(), "represent");
    const int m = table.m();
    const std::size_t block = static_cast<std::size_t>(m) * m;
    std::vector<Complex> acc(block, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Complex c = f.values[i];
        if (c == Complex(0.0, 0.0)) continue;
        const Complex* w = table.block(i);
        for (std::size_t j = 0; j < block; ++j) acc[j] += c * w[j];
    }
    const double weight = quantization_prefactor(2) * std::pow(f.grid.spacing(), 2);
    FockMatrix x{m, Eigen::Map<RowMatrix>(acc.data(), m, m) * weight, table.theta0(), "r(Op f) symbol=" + hash_hex(f.hash())};
    return x;
}

inline FockMatrix represent(const Symbol& f, int m, const ThetaMatrix& th) {
    require_fock_theta(th);
    if (f.grid.d != 2) throw DimensionError("represent: symbol must live on a 2-d grid");
    if (m < 2) throw DomainError("represent: M must be at least 2");
    const std::size_t block = static_cast<std::size_t>(m) * m;
    std::vector<Complex> acc(block, Complex(0.0, 0.0)), w(block);
    const auto xs = coordinates(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Complex c = f.values[i];
        if (c == Complex(0.0, 0.0)) continue;
        displacement_into(m, th.theta0, xs[2 * i], xs[2 * i + 1], w.data());
        for (std::size_t j = 0; j < block; ++j) acc[j] += c * w[j];
    }
    const double weight = quantization_prefactor(2) * std::pow(f.grid.spacing(), 2);
    return {m, Eigen::Map<RowMatrix>(acc.data(), m, m) * weight, th.theta0, "r(Op f) symbol=" + hash_hex(f.hash())};
}

inline Complex trace_tau(const FockMatrix& x) { return x.matrix.trace(); }

inline Truncated<Complex> trace_tau_report(const FockMatrix& x) {
    const int c = x.m / 2;
    return {x.matrix.trace(), x.matrix.topLeftCorner(c, c).trace()};
}

inline double lp_norm_of(const Eigen::MatrixXcd& a, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be at least 1");
    const Eigen::VectorXd s = linalg::singular_values(a);
    if (std::isinf(p)) return s.size() ? s(0) : 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
    return std::pow(acc, 1.0 / p);
}

inline double lp_norm(const FockMatrix& x, double p) { return lp_norm_of(x.matrix, p); }

inline Truncated<double> lp_norm_report(const FockMatrix& x, double p) {
    const int c = x.m / 2;
    return {lp_norm_of(x.matrix, p), lp_norm_of(x.matrix.topLeftCorner(c, c), p)};
}

// tau(Op f) / f(0) predicted by the prefactor: (2 pi)^{-1/2} * 2 pi / theta0
inline double trace_constant(const ThetaMatrix& th) {
    return quantization_prefactor(th.d) * std::pow(2.0 * std::numbers::pi, th.d / 2.0) / th.abs_pfaffian();
}

struct TraceCalibration {
    double fitted = 0.0;
    double predicted = 0.0;
    double truncation_error = 0.0;
};

// Gaussian calibration symbol e^{-|s|^2/2}
inline TraceCalibration calibrate_trace(const DisplacementTable& table, const ThetaMatrix& th) {
    const Symbol f = gaussian(table.grid(), 1.0);
    const auto t = trace_tau_report(represent(f, table));
    return {t.full.real(), trace_constant(th), t.error()};
}

// symbol whose quantization is the matrix unit e_kl: (theta0 / (2 pi p)) conj(W_kl(s))
inline Symbol matrix_unit_symbol(int k, int l, const GridSpec& g, const ThetaMatrix& th, double resolution_tol = 1e-6) {
    require_fock_theta(th);
    if (g.d != 2) throw DimensionError("matrix_unit_symbol: grid must be 2-d");
    if (k < 0 || l < 0) throw DomainError("matrix_unit_symbol: indices must be nonnegative");
    const int m = std::max(k, l) + 2;
    const double scale = th.theta0 / (2.0 * std::numbers::pi * quantization_prefactor(2));
    std::vector<Complex> w(static_cast<std::size_t>(m) * m);
    Symbol f = Symbol::sample(g, [&](const double* s) {
        displacement_into(m, th.theta0, s[0], s[1], w.data());
        return scale * std::conj(w[static_cast<std::size_t>(k) * m + l]);
    });
    // int |W_kl(s)|^2 ds = 2 pi / theta0
    const double expected = scale * std::sqrt(2.0 * std::numbers::pi / th.theta0);
    const double got = f.l2_norm();
    const double rel = std::abs(got - expected) / expected;
    if (rel > resolution_tol)
        throw ResolutionError("matrix_unit_symbol(" + std::to_string(k) + "," + std::to_string(l) + "): quadrature norm " +
                              std::to_string(got) + " vs exact " + std::to_string(expected) + " (relative " + std::to_string(rel) +
                              "); enlarge L or N");
    return f;
}

// sum over ordered multi-indices |alpha| <= m of ||r(Op(s^alpha f))||_p
inline Truncated<double> sobolev_norm(const Symbol& f, int order, double p, const DisplacementTable& table) {
    if (order < 0) throw DomainError("sobolev_norm: order must be nonnegative");
    if (!(p >= 1.0)) throw DomainError("sobolev_norm: p must be at least 1");
    Truncated<double> acc;
    for (const auto& alpha : calculus::multi_indices_up_to(f.grid.d, order)) {
        const auto v = lp_norm_report(represent(calculus::derivative_symbol(f, alpha), table), p);
        acc.full += v.full;
        acc.corner += v.corner;
    }
    return acc;
}

inline Truncated<double> sobolev_norm(const Symbol& f, int order, double p, int m, const ThetaMatrix& th) {
    return sobolev_norm(f, order, p, DisplacementTable(f.grid, th.theta0, m));
}

}  // namespace moyal::fock
