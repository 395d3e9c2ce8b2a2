#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>

#include "moyal/core/error.hpp"

namespace moyal::linalg {

inline std::string condition_report(const Eigen::MatrixXcd& a) {
    std::ostringstream os;
    std::size_t bad = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) ++bad;
    os << "dim=" << a.rows() << "x" << a.cols() << " non-finite=" << bad;
    if (bad == 0 && a.size() > 0) os << " frobenius=" << a.norm() << " max_abs=" << a.cwiseAbs().maxCoeff();
    return os.str();
}

// eigenvalues of a Hermitian matrix (lower triangle read), ascending
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    Eigen::MatrixXcd work = a;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
    if (info != 0)
        throw NumericalError("zheevd failed with info=" + std::to_string(info) + " (" + condition_report(a) + ")");
    return w;
}

// singular values, descending
inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    Eigen::VectorXd s(std::min(m, n));
    if (s.size() == 0) return s;
    Eigen::MatrixXcd work = a;
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("zgesdd failed with info=" + std::to_string(info) + " (" + condition_report(a) + ")");
    return s;
}

inline bool is_hermitian(const Eigen::MatrixXcd& a, double rel_tol = 1e-12) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace moyal::linalg
