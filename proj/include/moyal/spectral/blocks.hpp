#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "moyal/core/linalg.hpp"
#include "moyal/core/operator.hpp"
#include "moyal/spectral/cwikel.hpp"
#include "moyal/trace/spectrum.hpp"

namespace moyal::spectral {

// Unit cells of an open-box grid whose spacing is 1/ppu.
struct CellGeometry {
    GridSpec grid;
    int ppu = 1;

    explicit CellGeometry(const GridSpec& g) : grid(g) {
        validate(g);
        if (g.boundary != Boundary::open_box) throw DomainError("blocks: the decomposition runs in open-box mode");
        const double q = 1.0 / g.spacing();
        ppu = static_cast<int>(std::lround(q));
        if (ppu < 1 || std::abs(q - ppu) > 1e-9 * q) throw DomainError("blocks: grid spacing must be 1/integer");
        const double side = std::round(g.length);
        if (std::abs(g.length - side) > 1e-9) throw DomainError("blocks: box side must be an integer");
    }

    static int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

    int cell(int offset) const { return floor_div(offset, ppu); }

    // centered residue in {-1, 0, 1}
    static int residue3(int m) { return ((m % 3) + 4) % 3 - 1; }

    std::vector<int> cell_of(std::size_t flat) const {
        std::vector<int> off(grid.d), c(grid.d);
        grid.offsets(flat, off.data());
        for (int k = 0; k < grid.d; ++k) c[k] = cell(off[k]);
        return c;
    }

    bool cell_complete(int c) const { return c * ppu >= -grid.half() && (c + 1) * ppu - 1 <= grid.half() - 1; }

    int min_cell() const { return cell(-grid.half()); }
    int max_cell() const { return cell(grid.half() - 1); }
};

// sub-matrix supported on given row and column indices of a larger operator
struct SparseBlock {
    std::vector<Eigen::Index> rows, cols;
    Eigen::MatrixXcd values;
};

inline Eigen::MatrixXcd dense(const SparseBlock& b, Eigen::Index dim) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < b.rows.size(); ++i)
        for (std::size_t j = 0; j < b.cols.size(); ++j) out(b.rows[i], b.cols[j]) = b.values(i, j);
    return out;
}

namespace detail {

// positions (in a and in b) of the common indices
inline std::vector<std::pair<std::size_t, std::size_t>> common(const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b) {
    std::map<Eigen::Index, std::size_t> pos;
    for (std::size_t j = 0; j < b.size(); ++j) pos[b[j]] = j;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (auto it = pos.find(a[i]); it != pos.end()) out.emplace_back(i, it->second);
    return out;
}

inline double contraction_max(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right,
                              const std::vector<std::pair<std::size_t, std::size_t>>& idx) {
    if (idx.empty()) return 0.0;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(left.rows(), right.cols());
    for (auto [i, j] : idx) acc += left.col(static_cast<Eigen::Index>(i)) * right.row(static_cast<Eigen::Index>(j));
    return max_abs(acc);
}

}  // namespace detail

// max entries of A B, A^* B and A B^*
inline double product_residual(const SparseBlock& a, const SparseBlock& b) {
    double r = detail::contraction_max(a.values, b.values, detail::common(a.cols, b.rows));
    r = std::max(r, detail::contraction_max(a.values.adjoint(), b.values, detail::common(a.rows, b.rows)));
    r = std::max(r, detail::contraction_max(a.values, b.values.adjoint(), detail::common(a.cols, b.cols)));
    return r;
}

// T_{m,l1}: kernel of Op(f) between cell m (columns) and cell m + l1 (rows)
struct CellBlock {
    std::vector<int> m;
    double weight = 1.0;  // h(m)
    SparseBlock block;
};

struct BlockFamily {
    std::vector<int> l1, l2;
    std::vector<CellBlock> members;
};

struct BlockDecomposition {
    GridSpec grid;
    int ppu = 1;
    std::vector<BlockFamily> families;
};

inline void require_unit_support(const Symbol& f) {
    const GridSpec& g = f.grid;
    const auto xs = coordinates(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        bool inside = true;
        for (int k = 0; k < g.d; ++k) inside = inside && std::abs(xs[i * g.d + k]) <= 1.0;
        if (!inside && f.values[i] != Complex(0.0, 0.0)) throw DomainError("block_decompose: symbol is not supported in [-1,1]^d");
    }
}

inline std::vector<std::vector<int>> offsets_cube(int d) {
    std::vector<std::vector<int>> out{{}};
    for (int k = 0; k < d; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
            for (int c = -1; c <= 1; ++c) {
                auto w = v;
                w.push_back(c);
                next.push_back(w);
            }
        out = std::move(next);
    }
    return out;
}

inline BlockDecomposition block_decompose(const Symbol& f, const ThetaMatrix& th) {
    const CellGeometry geo(f.grid);
    require_unit_support(f);
    const GridSpec& g = f.grid;
    const GridOperator x = quantize(g, th, f);

    // grid points per cell
    std::map<std::vector<int>, std::vector<Eigen::Index>> cells;
    for (std::size_t i = 0; i < g.points(); ++i) cells[geo.cell_of(i)].push_back(static_cast<Eigen::Index>(i));

    BlockDecomposition out{g, geo.ppu, {}};
    const auto cube = offsets_cube(g.d);
    for (const auto& l1 : cube)
        for (const auto& l2 : cube) {
            BlockFamily fam{l1, l2, {}};
            for (const auto& [m, cols] : cells) {
                bool in_class = true;
                for (int k = 0; k < g.d; ++k) in_class = in_class && CellGeometry::residue3(m[k]) == l2[k];
                if (!in_class) continue;
                std::vector<int> target(m);
                for (int k = 0; k < g.d; ++k) target[k] += l1[k];
                const auto rit = cells.find(target);
                if (rit == cells.end()) continue;
                const auto& rows = rit->second;
                double r2 = 0.0;
                for (int c : m) r2 += static_cast<double>(c) * c;
                CellBlock cb{m, std::pow(1.0 + r2, -g.d / 2.0), {rows, cols, Eigen::MatrixXcd(rows.size(), cols.size())}};
                for (std::size_t i = 0; i < rows.size(); ++i)
                    for (std::size_t j = 0; j < cols.size(); ++j) cb.block.values(i, j) = x.matrix(rows[i], cols[j]);
                fam.members.push_back(std::move(cb));
            }
            out.families.push_back(std::move(fam));
        }
    return out;
}

// T_{l1,l2} = sum_m h(m) T_{m,l1}, dense
inline Eigen::MatrixXcd family_operator(const BlockFamily& fam, Eigen::Index dim) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& cb : fam.members)
        for (std::size_t i = 0; i < cb.block.rows.size(); ++i)
            for (std::size_t j = 0; j < cb.block.cols.size(); ++j)
                out(cb.block.rows[i], cb.block.cols[j]) += cb.weight * cb.block.values(i, j);
    return out;
}

inline double reconstruction_residual(const BlockDecomposition& dec, const Symbol& f, const ThetaMatrix& th) {
    const auto dim = static_cast<Eigen::Index>(dec.grid.points());
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& fam : dec.families) sum += family_operator(fam, dim);
    return max_abs(sum - cwikel_operator(f, th, Variant::floor).matrix.matrix);
}

inline double orthogonality_residual(const BlockDecomposition& dec) {
    double r = 0.0;
    for (const auto& fam : dec.families)
        for (std::size_t a = 0; a < fam.members.size(); ++a)
            for (std::size_t b = 0; b < fam.members.size(); ++b)
                if (a != b) r = std::max(r, product_residual(fam.members[a].block, fam.members[b].block));
    return r;
}

// singular values of the compressed family vs the merge of member spectra
inline double merge_residual(const BlockFamily& fam) {
    std::vector<Eigen::Index> rows, cols;
    std::vector<trace::SingularSpectrum> parts;
    for (const auto& cb : fam.members) {
        rows.insert(rows.end(), cb.block.rows.begin(), cb.block.rows.end());
        cols.insert(cols.end(), cb.block.cols.begin(), cb.block.cols.end());
        parts.push_back(singular_values_of(cb.weight * cb.block.values));
    }
    if (rows.empty()) return 0.0;
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
    for (const auto& cb : fam.members) {
        std::vector<Eigen::Index> ri, ci;
        for (auto r : cb.block.rows) ri.push_back(std::lower_bound(rows.begin(), rows.end(), r) - rows.begin());
        for (auto c : cb.block.cols) ci.push_back(std::lower_bound(cols.begin(), cols.end(), c) - cols.begin());
        for (std::size_t i = 0; i < ri.size(); ++i)
            for (std::size_t j = 0; j < ci.size(); ++j) comp(ri[i], ci[j]) = cb.weight * cb.block.values(i, j);
    }
    auto whole = singular_values_of(comp).values;
    auto merged = trace::direct_sum_spectrum(parts).values;
    const std::size_t n = std::max(whole.size(), merged.size());
    whole.resize(n, 0.0);
    merged.resize(n, 0.0);
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) r = std::max(r, std::abs(whole[k] - merged[k]));
    return r;
}

struct Equivalence {
    double residual = 0.0;
    double spectral_residual = 0.0;
};

// ||T_{m,l1} - U_m S_{l1} U_m^{-1}||_max on the patch m + [-1,2)^d, and the spectral gap between T_{m,l1} and S_{l1}
inline Equivalence local_block_equivalence(const Symbol& f, const ThetaMatrix& th, const std::vector<int>& m, const std::vector<int>& l1) {
    const CellGeometry geo(f.grid);
    const GridSpec& g = f.grid;
    if (static_cast<int>(m.size()) != g.d || static_cast<int>(l1.size()) != g.d) throw DimensionError("local_block_equivalence: wrong dimension");
    for (int k = 0; k < g.d; ++k) {
        if (l1[k] < -1 || l1[k] > 1) throw DomainError("local_block_equivalence: l1 must lie in {-1,0,1}^d");
        for (int c = m[k] - 1; c <= m[k] + 1; ++c)
            if (!geo.cell_complete(c)) throw DomainError("local_block_equivalence: patch around m leaves the box");
    }
    const GridOperator x = quantize(g, th, f);
    const double weight = quantization_prefactor(g.d) * std::pow(g.spacing(), g.d);
    const double h = g.spacing();

    // patch points: per-axis offsets j in [-ppu, 2 ppu) relative to the cell origin
    const int side = 3 * geo.ppu;
    std::size_t count = 1;
    for (int k = 0; k < g.d; ++k) count *= side;
    std::vector<std::vector<int>> local(count, std::vector<int>(g.d));
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t r = p;
        for (int k = g.d - 1; k >= 0; --k) {
            local[p][k] = static_cast<int>(r % side) - geo.ppu;
            r /= side;
        }
    }
    auto in_cell = [&](const std::vector<int>& j, const std::vector<int>& c) {
        for (int k = 0; k < g.d; ++k)
            if (CellGeometry::floor_div(j[k], geo.ppu) != c[k]) return false;
        return true;
    };
    const std::vector<int> zero(g.d, 0);

    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(count, count), T = Eigen::MatrixXcd::Zero(count, count);
    std::vector<double> mt(g.d), t(g.d), s(g.d), tg(g.d), sg(g.d);
    std::vector<int> diff(g.d), ot(g.d), os(g.d);
    for (int k = 0; k < g.d; ++k) mt[k] = m[k];
    double residual = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = 0; b < count; ++b) {
            // S_{l1}[t, s] on [-1,2)^d
            if (in_cell(local[a], l1) && in_cell(local[b], zero)) {
                bool inside = true;
                for (int k = 0; k < g.d; ++k) {
                    diff[k] = local[a][k] - local[b][k];
                    inside = inside && g.in_window(diff[k]);
                    t[k] = h * local[a][k];
                    s[k] = h * local[b][k];
                }
                if (inside) S(a, b) = weight * f.values[g.flat(diff.data())] * std::polar(1.0, -0.5 * th.pairing(s.data(), t.data()));
            }
            // T_{m,l1} on m + [-1,2)^d
            for (int k = 0; k < g.d; ++k) {
                ot[k] = local[a][k] + m[k] * geo.ppu;
                os[k] = local[b][k] + m[k] * geo.ppu;
            }
            std::vector<int> cm(m), cml(m);
            for (int k = 0; k < g.d; ++k) cml[k] += l1[k];
            if (in_cell(ot, cml) && in_cell(os, cm)) T(a, b) = x.matrix(g.flat(ot.data()), g.flat(os.data()));
        }
    }
    // U_m S U_m^{-1}: phases e^{-(i/2)<m, theta t>} and e^{(i/2)<m, theta s>} with t, s in m + patch
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b) {
            for (int k = 0; k < g.d; ++k) {
                tg[k] = h * local[a][k] + m[k];
                sg[k] = h * local[b][k] + m[k];
            }
            const Complex ph = std::polar(1.0, -0.5 * (th.pairing(mt.data(), tg.data()) - th.pairing(mt.data(), sg.data())));
            residual = std::max(residual, std::abs(T(a, b) - ph * S(a, b)));
        }
    const auto st = singular_values_of(T).values, ss = singular_values_of(S).values;
    double sr = 0.0;
    for (std::size_t k = 0; k < st.size(); ++k) sr = std::max(sr, std::abs(st[k] - ss[k]));
    return {residual, sr};
}

}  // namespace moyal::spectral
