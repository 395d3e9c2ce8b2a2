#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "moyal/core/error.hpp"

namespace moyal::trace {

// Descending singular values; eigenvalues (same order, sorted by magnitude) when the source was Hermitian.
struct SingularSpectrum {
    std::vector<double> values;
    std::vector<double> eigenvalues;
    std::string source;

    std::size_t count() const { return values.size(); }
    bool has_eigenvalues() const { return !eigenvalues.empty(); }
};

inline void validate(const SingularSpectrum& s) {
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        if (!(s.values[k] >= 0.0) || !std::isfinite(s.values[k])) throw DomainError("spectrum: values must be finite and nonnegative");
        if (k > 0 && s.values[k] > s.values[k - 1]) throw DomainError("spectrum: values must be descending");
    }
    if (s.has_eigenvalues() && s.eigenvalues.size() != s.values.size()) throw DomainError("spectrum: eigenvalue count differs");
}

inline SingularSpectrum from_values(std::vector<double> v, std::string source = "") {
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("spectrum: values must be finite and nonnegative");
    std::stable_sort(v.begin(), v.end(), std::greater<double>());
    return {std::move(v), {}, std::move(source)};
}

// order by |lambda| descending, ties by original index
inline SingularSpectrum from_eigenvalues(const std::vector<double>& lambda, std::string source = "") {
    std::vector<std::size_t> idx(lambda.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(lambda[a]) > std::abs(lambda[b]); });
    SingularSpectrum s;
    s.source = std::move(source);
    s.values.reserve(idx.size());
    s.eigenvalues.reserve(idx.size());
    for (std::size_t i : idx) {
        s.values.push_back(std::abs(lambda[i]));
        s.eigenvalues.push_back(lambda[i]);
    }
    return s;
}

inline SingularSpectrum scaled(SingularSpectrum s, double c) {
    if (c < 0.0) throw DomainError("spectrum: scale must be nonnegative");
    for (auto& v : s.values) v *= c;
    for (auto& v : s.eigenvalues) v *= c;
    return s;
}

// sup_k (k+1) mu(k)
inline double weak_quasinorm(const SingularSpectrum& s) {
    double best = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k) best = std::max(best, (k + 1.0) * s.values[k]);
    return best;
}

inline double trace_norm(const SingularSpectrum& s) {
    double acc = 0.0, c = 0.0;
    for (double v : s.values) {
        const double t = acc + v;
        c += std::abs(acc) >= std::abs(v) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    }
    return acc + c;
}

// descending products s_i t_k truncated to t.count()
inline SingularSpectrum tensor_spectrum(const std::vector<double>& s_values, const SingularSpectrum& t) {
    for (double v : s_values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("tensor_spectrum: factor values must be finite and nonnegative");
    SingularSpectrum out;
    out.source = "tensor(" + t.source + ")";
    const std::size_t n = t.count();
    out.values.reserve(n);
    using Item = std::tuple<double, std::size_t, std::size_t>;  // value, -factor, position
    auto cmp = [](const Item& a, const Item& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) > std::get<1>(b);
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    if (n > 0)
        for (std::size_t i = 0; i < s_values.size(); ++i) heap.emplace(s_values[i] * t.values[0], i, 0);
    while (out.values.size() < n && !heap.empty()) {
        auto [v, i, k] = heap.top();
        heap.pop();
        out.values.push_back(v);
        if (k + 1 < n) heap.emplace(s_values[i] * t.values[k + 1], i, k + 1);
    }
    out.values.resize(n, 0.0);
    return out;
}

// merge descending, stable by part index
inline SingularSpectrum direct_sum_spectrum(const std::vector<SingularSpectrum>& parts) {
    struct Entry {
        double value;
        double eig;
    };
    bool signed_parts = !parts.empty();
    for (const auto& p : parts) signed_parts = signed_parts && (p.has_eigenvalues() || p.count() == 0);
    std::vector<Entry> all;
    for (const auto& p : parts)
        for (std::size_t k = 0; k < p.count(); ++k) all.push_back({p.values[k], signed_parts ? p.eigenvalues[k] : 0.0});
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
    SingularSpectrum out;
    out.source = "direct_sum";
    for (const auto& e : all) {
        out.values.push_back(e.value);
        if (signed_parts) out.eigenvalues.push_back(e.eig);
    }
    return out;
}

}  // namespace moyal::trace
