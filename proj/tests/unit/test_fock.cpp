#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "moyal/moyal.hpp"

using namespace moyal;

namespace {

constexpr double kTheta0 = 2.0;

const GridSpec& fock_grid() {
    static const GridSpec g{2, 64, 16.0, Boundary::open_box};
    return g;
}

const ThetaMatrix& theta() {
    static const ThetaMatrix th = make_theta(2, kTheta0);
    return th;
}

const fock::DisplacementTable& table32() {
    static const fock::DisplacementTable t(fock_grid(), kTheta0, 32);
    return t;
}

// Hermite functions h_0..h_{count-1} at x
std::vector<double> hermite_functions(int count, double x) {
    std::vector<double> h(count);
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (count > 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int n = 1; n + 1 < count; ++n) h[n + 1] = std::sqrt(2.0 / (n + 1)) * x * h[n] - std::sqrt(double(n) / (n + 1)) * h[n - 1];
    return h;
}

// <h_j, D h_k> with (D psi)(x) = e^{-i x0 p0 / 2} e^{i p0 x} psi(x - x0), trapezoid on [-20, 20]
Eigen::MatrixXcd displacement_by_quadrature(int count, double x0, double p0) {
    const int pts = 8001;
    const double a = -20.0, h = 40.0 / (pts - 1);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(count, count);
    for (int i = 0; i < pts; ++i) {
        const double x = a + h * i;
        const auto hj = hermite_functions(count, x), hk = hermite_functions(count, x - x0);
        const Complex w = h * std::polar(1.0, p0 * x - 0.5 * x0 * p0);
        for (int j = 0; j < count; ++j)
            for (int k = 0; k < count; ++k) out(j, k) += w * hj[j] * hk[k];
    }
    return out;
}

}  // namespace

TEST(Displacement, ZeroIsIdentityAndSmallMIsRejected) {
    const auto w = fock::displacement_matrix(8, kTheta0, 0.0, 0.0);
    EXPECT_EQ(max_abs(w - Eigen::MatrixXcd::Identity(8, 8)), 0.0);
    EXPECT_THROW(fock::displacement_matrix(1, kTheta0, 0.1, 0.2), DomainError);
}

TEST(Displacement, InverseOnCorner) {
    const int m = 48, half = m / 2;
    const auto w = fock::displacement_matrix(m, kTheta0, 0.7, -0.4), wm = fock::displacement_matrix(m, kTheta0, -0.7, 0.4);
    const Eigen::MatrixXcd prod = (w * wm).topLeftCorner(half, half);
    EXPECT_LE(max_abs(prod - Eigen::MatrixXcd::Identity(half, half)), 1e-10);
}

TEST(Displacement, MatchesHermiteQuadratureOracle) {
    const int count = 13;
    const std::vector<std::pair<double, double>> points = {{0.5, 0.0}, {0.0, -1.0}, {1.2, 1.1}, {-1.4, 1.4}, {2.0, 0.0}};
    for (const auto& [s1, s2] : points) {
        const Complex alpha = fock::weyl_alpha(kTheta0, s1, s2);
        const double x0 = std::sqrt(2.0) * alpha.real(), p0 = std::sqrt(2.0) * alpha.imag();
        const Eigen::MatrixXcd oracle = displacement_by_quadrature(count, x0, p0);
        const Eigen::MatrixXcd w = fock::displacement_matrix(24, kTheta0, s1, s2).topLeftCorner(count, count);
        EXPECT_LE(max_abs(w - oracle), 1e-8) << "s = (" << s1 << ", " << s2 << ")";
    }
}

TEST(Represent, ZeroAndLinearity) {
    const Symbol zero = Symbol::zeros(fock_grid());
    EXPECT_EQ(max_abs(fock::represent(zero, table32()).matrix), 0.0);
    EXPECT_EQ(std::abs(fock::trace_tau(fock::represent(zero, table32()))), 0.0);
    const Symbol f = gaussian(fock_grid(), 0.8, {0.3, 0.1}), g = gaussian(fock_grid(), 1.3, {-0.5, 0.2});
    const Complex a(1.5, -0.5), b(-0.25, 2.0);
    const Eigen::MatrixXcd lhs = fock::represent(a * f + b * g, table32()).matrix;
    const Eigen::MatrixXcd rhs = a * fock::represent(f, table32()).matrix + b * fock::represent(g, table32()).matrix;
    EXPECT_LE(max_abs(lhs - rhs), 1e-12);
}

TEST(Represent, TableAndDirectRoutesAgree) {
    const Symbol f = gaussian(fock_grid(), 1.0);
    EXPECT_LE(max_abs(fock::represent(f, table32()).matrix - fock::represent(f, 32, theta()).matrix), 1e-13);
}

TEST(MatrixUnits, GroundStateProjection) {
    const Eigen::MatrixXcd e00 = fock::represent(fock::matrix_unit_symbol(0, 0, fock_grid(), theta()), table32()).matrix;
    Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(32, 32);
    target(0, 0) = 1.0;
    EXPECT_LE(max_abs(e00 - target), 1e-4);
    EXPECT_LE(max_abs(e00 * e00 - e00), 1e-4);
    const Eigen::VectorXd s = linalg::singular_values(e00);
    EXPECT_NEAR(s(0), 1.0, 1e-4);
    EXPECT_LE(s(1), 1e-4);
}

TEST(MatrixUnits, TraceOfDiagonalUnits) {
    for (int k = 0; k <= 4; ++k) {
        const auto x = fock::represent(fock::matrix_unit_symbol(k, k, fock_grid(), theta()), table32());
        EXPECT_NEAR(fock::trace_tau(x).real(), 1.0, 1e-3) << "k = " << k;
    }
}

TEST(MatrixUnits, ProductAdjointOrthogonality) {
    auto unit = [](int k, int l) { return fock::represent(fock::matrix_unit_symbol(k, l, fock_grid(), theta()), table32()).matrix; };
    EXPECT_LE(max_abs(unit(0, 1) * unit(1, 2) - unit(0, 2)), 1e-3);
    EXPECT_LE(max_abs(unit(1, 2).adjoint() - unit(2, 1)), 1e-3);
    EXPECT_LE(max_abs(unit(0, 0) * unit(1, 1)), 1e-3);
}

TEST(MatrixUnits, UnderResolvedGridIsRejected) {
    const GridSpec coarse{2, 8, 4.0, Boundary::open_box};
    EXPECT_THROW(fock::matrix_unit_symbol(20, 20, coarse, theta()), ResolutionError);
}

TEST(LpNorm, Examples) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(4, 4);
    e(0, 0) = 1.0;
    for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(fock::lp_norm_of(e, p), 1.0, 1e-14);
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    EXPECT_NEAR(fock::lp_norm_of(d, 2.0), 5.0, 1e-14);
}

TEST(LpNorm, HilbertSchmidtAgreesWithGrid) {
    const fock::DisplacementTable t64(fock_grid(), kTheta0, 64);
    const Symbol f = gaussian(fock_grid(), 1.0);
    const double fock_l2 = fock::lp_norm(fock::represent(f, t64), 2.0);
    const double expect = quantization_prefactor(2) * std::sqrt(2.0 * std::numbers::pi / kTheta0) * f.l2_norm();
    EXPECT_NEAR(fock_l2 / expect, 1.0, 1e-3);
}

TEST(Trace, CalibrationConstant) {
    const auto cal = fock::calibrate_trace(table32(), theta());
    EXPECT_NEAR(cal.fitted / cal.predicted, 1.0, 1e-6);
    EXPECT_NEAR(cal.predicted, fock::trace_constant(theta()), 1e-12);
}

TEST(Sobolev, ZeroOrderAndTruncationStability) {
    const Symbol f = gaussian(fock_grid(), 1.0);
    const auto x = fock::represent(f, table32());
    EXPECT_NEAR(fock::sobolev_norm(f, 0, 1.0, table32()).full, fock::lp_norm(x, 1.0), 1e-12);
    const auto n48 = fock::sobolev_norm(f, 2, 1.0, 48, theta()), n64 = fock::sobolev_norm(f, 2, 1.0, 64, theta());
    EXPECT_TRUE(std::isfinite(n64.full));
    EXPECT_NEAR(n48.full / n64.full, 1.0, 0.02);
}

TEST(DisplacementTable, SaveLoadRoundTrip) {
    const GridSpec g{2, 8, 4.0, Boundary::open_box};
    const fock::DisplacementTable t(g, kTheta0, 6);
    const auto path = (std::filesystem::temp_directory_path() / "moyal_table_test.bin").string();
    t.save(path);
    const auto back = fock::DisplacementTable::load(path);
    EXPECT_TRUE(back.grid() == g);
    EXPECT_EQ(back.m(), 6);
    for (std::size_t i = 0; i < g.points(); ++i)
        for (int k = 0; k < 36; ++k) EXPECT_EQ(back.block(i)[k], t.block(i)[k]);
    std::filesystem::resize_file(path, 20);
    EXPECT_THROW(fock::DisplacementTable::load(path), IoError);
    std::filesystem::remove(path);
}
