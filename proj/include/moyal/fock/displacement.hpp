#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "moyal/core/error.hpp"

namespace moyal::fock {

using Complex = std::complex<double>;

// W(s) acts as the coherent displacement D(alpha) with alpha = sqrt(theta0/2) (s2 + i s1)
inline Complex weyl_alpha(double theta0, double s1, double s2) {
    return std::sqrt(theta0 / 2.0) * Complex(s2, s1);
}

// <h_j, W(s) h_k> for j, k < M, written row-major into out (M*M entries).
// Normalized associated Laguerre functions by upward recurrence.
inline void displacement_into(int M, double theta0, double s1, double s2, Complex* out) {
    if (M < 2) throw DomainError("displacement: M must be at least 2");
    const std::size_t mm = static_cast<std::size_t>(M);
    std::fill(out, out + mm * mm, Complex(0.0, 0.0));
    const Complex alpha = weyl_alpha(theta0, s1, s2);
    const double x = std::norm(alpha);
    if (x == 0.0) {
        for (std::size_t i = 0; i < mm; ++i) out[i * mm + i] = 1.0;
        return;
    }
    const Complex ph = alpha / std::sqrt(x);
    const Complex nph = -std::conj(ph);
    const double logx = std::log(x);
    std::vector<double> l(mm);
    Complex phk(1.0, 0.0), nphk(1.0, 0.0);
    for (int k = 0; k < M; ++k) {
        const int len = M - k;
        l[0] = std::exp(0.5 * k * logx - 0.5 * x - 0.5 * std::lgamma(k + 1.0));
        if (len > 1) l[1] = (1.0 + k - x) * l[0] / std::sqrt(k + 1.0);
        for (int j = 1; j + 1 < len; ++j)
            l[j + 1] = ((2.0 * j + 1.0 + k - x) * l[j] - std::sqrt(double(j) * (j + k)) * l[j - 1]) /
                       std::sqrt((j + 1.0) * (j + k + 1.0));
        for (int n = 0; n < len; ++n) {
            double v = l[n];
            if (std::abs(v) < 1e-300) v = 0.0;
            const std::size_t m = static_cast<std::size_t>(n + k);
            out[m * mm + n] = phk * v;
            if (k > 0) out[static_cast<std::size_t>(n) * mm + m] = nphk * v;
        }
        phk *= ph;
        nphk *= nph;
    }
}

inline Eigen::MatrixXcd displacement_matrix(int M, double theta0, double s1, double s2) {
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(M, M);
    displacement_into(M, theta0, s1, s2, w.data());
    return w;
}

}  // namespace moyal::fock
