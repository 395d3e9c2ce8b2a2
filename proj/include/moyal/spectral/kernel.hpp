#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "moyal/core/linalg.hpp"
#include "moyal/core/symbol.hpp"

namespace moyal::spectral {

// integral operator on [0,1)^d sampled at t_i = i / n per axis, quadrature weight n^{-d}
struct KernelOperator {
    int d = 1;
    int n = 0;
    Eigen::MatrixXcd samples;
    Eigen::MatrixXcd matrix;
    double coeff_bound = 0.0;
    double tail_fraction = 0.0;  // share of sum |c| carried by modes with |m|_inf >= n/4
    bool smooth = true;
};

inline std::size_t kernel_points(int d, int n) {
    std::size_t p = 1;
    for (int k = 0; k < d; ++k) p *= static_cast<std::size_t>(n);
    return p;
}

inline void kernel_point(int d, int n, std::size_t flat, double* t) {
    for (int k = d - 1; k >= 0; --k) {
        t[k] = static_cast<double>(flat % n) / n;
        flat /= n;
    }
}

inline void kernel_mode(int d, int n, std::size_t flat, int* m) {
    for (int k = d - 1; k >= 0; --k) {
        m[k] = static_cast<int>(flat % n) - n / 2;
        flat /= n;
    }
}

// c_{m1,m2} with K(t,s) = sum c e^{2 pi i (<m1,t> + <m2,s>)} on the sample grid
inline Eigen::MatrixXcd fourier_coefficients(const Eigen::MatrixXcd& samples, int d, int n) {
    const auto p = static_cast<Eigen::Index>(kernel_points(d, n));
    if (samples.rows() != p || samples.cols() != p) throw DimensionError("fourier_coefficients: sample shape does not match d and n");
    Eigen::MatrixXcd F(p, p);
    std::vector<double> t(d);
    std::vector<int> m(d);
    for (Eigen::Index a = 0; a < p; ++a) {
        kernel_mode(d, n, static_cast<std::size_t>(a), m.data());
        for (Eigen::Index i = 0; i < p; ++i) {
            kernel_point(d, n, static_cast<std::size_t>(i), t.data());
            double arg = 0.0;
            for (int k = 0; k < d; ++k) arg += m[k] * t[k];
            F(a, i) = std::polar(1.0, -2.0 * std::numbers::pi * arg);
        }
    }
    return F * samples * F.transpose() / (static_cast<double>(p) * static_cast<double>(p));
}

inline double fourier_coeff_bound(const Eigen::MatrixXcd& samples, int d, int n) {
    return fourier_coefficients(samples, d, n).cwiseAbs().sum();
}

inline KernelOperator kernel_from_samples(int d, int n, Eigen::MatrixXcd samples, double smooth_tol = 1e-6) {
    if (d < 1 || n < 2) throw DomainError("kernel_operator: need d >= 1 and n >= 2");
    KernelOperator k;
    k.d = d;
    k.n = n;
    k.samples = std::move(samples);
    const double p = static_cast<double>(kernel_points(d, n));
    k.matrix = k.samples / p;
    const Eigen::MatrixXcd c = fourier_coefficients(k.samples, d, n);
    k.coeff_bound = c.cwiseAbs().sum();
    double tail = 0.0;
    std::vector<int> m1(d), m2(d);
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        kernel_mode(d, n, static_cast<std::size_t>(a), m1.data());
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            kernel_mode(d, n, static_cast<std::size_t>(b), m2.data());
            int top = 0;
            for (int j = 0; j < d; ++j) top = std::max({top, std::abs(m1[j]), std::abs(m2[j])});
            if (4 * top >= n) tail += std::abs(c(a, b));
        }
    }
    k.tail_fraction = k.coeff_bound > 0.0 ? tail / k.coeff_bound : 0.0;
    k.smooth = k.tail_fraction <= smooth_tol;
    return k;
}

// K(const double* t, const double* s) -> Complex
template <class Fn>
KernelOperator kernel_operator(int d, int n, Fn&& kernel, double smooth_tol = 1e-6) {
    const auto p = static_cast<Eigen::Index>(kernel_points(d, n));
    Eigen::MatrixXcd samples(p, p);
    std::vector<double> t(d), s(d);
    for (Eigen::Index j = 0; j < p; ++j) {
        kernel_point(d, n, static_cast<std::size_t>(j), s.data());
        for (Eigen::Index i = 0; i < p; ++i) {
            kernel_point(d, n, static_cast<std::size_t>(i), t.data());
            samples(i, j) = kernel(t.data(), s.data());
        }
    }
    return kernel_from_samples(d, n, std::move(samples), smooth_tol);
}

inline double trace_norm(const KernelOperator& k) { return linalg::singular_values(k.matrix).sum(); }

}  // namespace moyal::spectral
