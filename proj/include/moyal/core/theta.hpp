#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "moyal/core/error.hpp"

namespace moyal {

struct ThetaMatrix {
    int d = 2;
    double theta0 = 1.0;
    Eigen::MatrixXd matrix;
    Eigen::MatrixXd inverse;

    // <t, theta u> for the block form built by make_theta
    double pairing(const double* t, const double* u) const {
        double acc = 0.0;
        for (int j = 0; j < d; j += 2) acc += t[j] * u[j + 1] - t[j + 1] * u[j];
        return theta0 * acc;
    }

    // theta u
    void apply(const double* u, double* out) const {
        for (int j = 0; j < d; j += 2) {
            out[j] = theta0 * u[j + 1];
            out[j + 1] = -theta0 * u[j];
        }
    }

    // theta^{-1} u
    void apply_inverse(const double* u, double* out) const {
        for (int j = 0; j < d; j += 2) {
            out[j] = -u[j + 1] / theta0;
            out[j + 1] = u[j] / theta0;
        }
    }

    double abs_pfaffian() const { return std::pow(theta0, d / 2); }
};

inline ThetaMatrix make_theta(int d, double theta0) {
    if (d <= 0 || d % 2 != 0) throw DimensionError("theta: dimension must be even and positive");
    if (!(theta0 > 0.0) || !std::isfinite(theta0)) throw DomainError("theta: theta0 must be positive");

    ThetaMatrix th;
    th.d = d;
    th.theta0 = theta0;
    th.matrix = Eigen::MatrixXd::Zero(d, d);
    th.inverse = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; j += 2) {
        th.matrix(j, j + 1) = theta0;
        th.matrix(j + 1, j) = -theta0;
        th.inverse(j, j + 1) = -1.0 / theta0;
        th.inverse(j + 1, j) = 1.0 / theta0;
    }
    const double err = (th.matrix * th.inverse - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-12) throw NumericalError("theta: inverse check failed");
    return th;
}

}  // namespace moyal
