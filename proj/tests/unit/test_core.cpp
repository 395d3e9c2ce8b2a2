#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "moyal/moyal.hpp"

using namespace moyal;

namespace {

constexpr double kTheta0 = 2.0;

GridSpec torus(int n) { return {2, n, compatible_length(n, kTheta0), Boundary::torus}; }

Symbol random_symbol(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Symbol f = Symbol::zeros(g);
    for (auto& v : f.values) v = Complex(nd(rng), nd(rng));
    return f;
}

std::vector<double> position(const GridSpec& g, const std::vector<int>& steps) {
    std::vector<double> t;
    for (int k : steps) t.push_back(g.spacing() * k);
    return t;
}

}  // namespace

TEST(Theta, ExamplesAndErrors) {
    const auto t1 = make_theta(2, 1.0);
    EXPECT_DOUBLE_EQ(t1.matrix(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(t1.matrix(1, 0), -1.0);
    EXPECT_DOUBLE_EQ(t1.inverse(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(t1.inverse(1, 0), 1.0);
    const auto t2 = make_theta(2, 2.0);
    EXPECT_DOUBLE_EQ(t2.inverse(0, 1), -0.5);
    EXPECT_DOUBLE_EQ(t2.inverse(1, 0), 0.5);
    EXPECT_NEAR((t2.matrix * t2.inverse - Eigen::MatrixXd::Identity(2, 2)).norm(), 0.0, 1e-15);
    EXPECT_THROW(make_theta(3, 1.0), DimensionError);
    EXPECT_THROW(make_theta(2, 0.0), DomainError);
    EXPECT_THROW(make_theta(2, -1.0), DomainError);
}

TEST(Grid, TorusCompatibility) {
    const GridSpec g = torus(32);
    EXPECT_TRUE(phase_compatible(g, make_theta(2, kTheta0)));
    EXPECT_NEAR(compatible_theta0(g), kTheta0, 1e-12);
    const GridSpec bad{2, 32, 16.0, Boundary::torus};
    EXPECT_FALSE(phase_compatible(bad, make_theta(2, kTheta0)));
}

TEST(TwistedShift, ZeroIsIdentity) {
    const GridSpec g = torus(16);
    const auto u = twisted_shift(g, make_theta(2, kTheta0), std::vector<int>{0, 0});
    EXPECT_EQ(max_abs(u.matrix - Eigen::MatrixXcd::Identity(u.dim(), u.dim())), 0.0);
}

TEST(TwistedShift, CommutationRelationOnTorus) {
    const GridSpec g = torus(16);
    const ThetaMatrix th = make_theta(2, kTheta0);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> step(-7, 7);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<int> a = {step(rng), step(rng)}, b = {step(rng), step(rng)};
        const std::vector<int> ab = {a[0] + b[0], a[1] + b[1]};
        const auto t = position(g, a), s = position(g, b);
        const Complex phase = std::polar(1.0, 0.5 * th.pairing(t.data(), s.data()));
        const Eigen::MatrixXcd lhs = twisted_shift(g, th, a).matrix * twisted_shift(g, th, b).matrix;
        EXPECT_LE(max_abs(lhs - phase * twisted_shift(g, th, ab).matrix), 1e-12);
    }
}

TEST(TwistedShift, UnitaryOnTorus) {
    const GridSpec g = torus(16);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const auto u = twisted_shift(g, th, std::vector<int>{3, -5});
    EXPECT_LE(max_abs(u.matrix.adjoint() * u.matrix - Eigen::MatrixXcd::Identity(u.dim(), u.dim())), 1e-12);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd xi(u.dim());
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = Complex(nd(rng), nd(rng));
    EXPECT_NEAR((u.matrix * xi).norm(), xi.norm(), 1e-12 * xi.norm());
}

TEST(TwistedShift, OffLatticeIsAlignmentError) {
    const GridSpec g = torus(16);
    EXPECT_THROW(twisted_shift(g, make_theta(2, kTheta0), std::vector<double>{0.3 * g.spacing(), 0.0}), AlignmentError);
}

TEST(Quantize, LatticeDeltaGivesShift) {
    const GridSpec g = torus(16);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const std::vector<int> s0 = {2, -3};
    const auto x = quantize(g, th, lattice_delta(g, s0));
    EXPECT_LE(max_abs(x.matrix - twisted_shift(g, th, s0).matrix), 1e-12);
}

TEST(Quantize, AdjointSymbol) {
    const GridSpec g = torus(12);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const Symbol f = random_symbol(g, 11);
    const auto lhs = adjoint(quantize(g, th, f));
    const auto rhs = quantize(g, th, adjoint_symbol(f));
    EXPECT_LE(max_abs(lhs.matrix - rhs.matrix), 1e-12);
}

TEST(Quantize, Linearity) {
    const GridSpec g = torus(12);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const Symbol f = random_symbol(g, 1), h = random_symbol(g, 2);
    const Complex a(0.7, -1.2), b(-2.0, 0.4);
    const auto lhs = quantize(g, th, a * f + b * h).matrix;
    const Eigen::MatrixXcd rhs = a * quantize(g, th, f).matrix + b * quantize(g, th, h).matrix;
    EXPECT_LE(max_abs(lhs - rhs), 1e-12);
}

TEST(Quantize, GridMismatchIsConfigError) {
    const Symbol f = Symbol::zeros(torus(12));
    EXPECT_THROW(quantize(torus(16), make_theta(2, kTheta0), f), ConfigError);
}

TEST(Quantize, GaussianHilbertSchmidtIsometry) {
    const GridSpec g{2, 32, 16.0, Boundary::torus};
    const ThetaMatrix th = make_theta(2, compatible_theta0(g));
    const Symbol f = gaussian(g, 1.0);
    const double hs = quantize(g, th, f).matrix.norm() * hs_calibration(g);
    EXPECT_NEAR(hs / f.l2_norm(), 1.0, 1e-6);
    // closed form of |f|_2 for exp(-|s|^2/2) in d = 2
    EXPECT_NEAR(f.l2_norm(), std::sqrt(std::numbers::pi), 1e-10);
}

TEST(Multiplier, ConstantIsIdentityAndNanIsRejected) {
    const GridSpec g = torus(8);
    const auto one = multiplier(g, [](const double*) { return Complex(1.0, 0.0); });
    EXPECT_EQ(max_abs(one.matrix - Eigen::MatrixXcd::Identity(one.dim(), one.dim())), 0.0);
    EXPECT_THROW(multiplier(g, [](const double*) { return Complex(std::nan(""), 0.0); }), DomainError);
}

TEST(Multiplier, CoordinateCommutator) {
    // open box: no wrapped entries
    const GridSpec g{2, 16, 8.0, Boundary::open_box};
    const ThetaMatrix th = make_theta(2, kTheta0);
    const std::vector<int> s = {3, -2};
    const auto u = twisted_shift(g, th, s);
    const auto sv = position(g, s);
    for (int k = 0; k < 2; ++k) {
        const auto dk = multiplier(g, [k](const double* x) { return Complex(x[k], 0.0); });
        const Eigen::MatrixXcd comm = dk.matrix * u.matrix - u.matrix * dk.matrix;
        EXPECT_LE(max_abs(comm - sv[k] * u.matrix), 1e-12);
    }
}

TEST(Multiplier, ExponentialConjugation) {
    const GridSpec g{2, 16, 8.0, Boundary::open_box};
    const ThetaMatrix th = make_theta(2, kTheta0);
    const std::vector<int> s = {-1, 4};
    const std::vector<double> t = {0.37, -1.1};
    const auto u = twisted_shift(g, th, s);
    const auto sv = position(g, s);
    const auto e = multiplier(g, [&](const double* x) { return std::polar(1.0, t[0] * x[0] + t[1] * x[1]); });
    const Eigen::MatrixXcd lhs = e.matrix * u.matrix * e.matrix.adjoint();
    EXPECT_LE(max_abs(lhs - std::polar(1.0, t[0] * sv[0] + t[1] * sv[1]) * u.matrix), 1e-12);
}

TEST(Product, IdentityAdjointAndReversal) {
    const GridSpec g = torus(8);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const auto a = quantize(g, th, random_symbol(g, 21)), b = quantize(g, th, random_symbol(g, 22));
    const auto id = twisted_shift(g, th, std::vector<int>{0, 0});
    EXPECT_LE(max_abs(materialize_product(a, id).matrix - a.matrix), 1e-15);
    EXPECT_EQ(max_abs(adjoint(adjoint(a)).matrix - a.matrix), 0.0);
    const auto lhs = adjoint(materialize_product(a, b)).matrix;
    const auto rhs = materialize_product(adjoint(b), adjoint(a)).matrix;
    EXPECT_LE(max_abs(lhs - rhs), 1e-12 * std::max(1.0, max_abs(lhs)));
    EXPECT_THROW(materialize_product(a, quantize(torus(12), th, Symbol::zeros(torus(12)))), Error);
}

TEST(MoyalProduct, TwistedProductMatchesDenseProduct) {
    const GridSpec g = torus(24);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const Symbol y = gaussian(g, 1.0, {0.4, -0.3});
    const Symbol sq = moyal_square(y, th), dense = moyal_square_dense(y, th);
    double err = 0.0, top = 0.0;
    for (std::size_t i = 0; i < sq.values.size(); ++i) {
        err = std::max(err, std::abs(sq.values[i] - dense.values[i]));
        top = std::max(top, std::abs(dense.values[i]));
    }
    EXPECT_LE(err / top, 1e-10);
}

TEST(Dequantize, RoundTrip) {
    const GridSpec g = torus(12);
    const ThetaMatrix th = make_theta(2, kTheta0);
    const Symbol f = random_symbol(g, 8);
    const Symbol back = dequantize(quantize(g, th, f), th);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) err = std::max(err, std::abs(back.values[i] - f.values[i]));
    EXPECT_LE(err, 1e-10);
}

TEST(Linalg, HermitianEigenvaluesAndSingularValues) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = -3.0;
    a(2, 2) = 2.0;
    const Eigen::VectorXd w = linalg::hermitian_eigenvalues(a);
    std::vector<double> ws(w.data(), w.data() + w.size());
    std::sort(ws.begin(), ws.end());
    EXPECT_NEAR(ws[0], -3.0, 1e-14);
    EXPECT_NEAR(ws[2], 2.0, 1e-14);
    const Eigen::VectorXd s = linalg::singular_values(a);
    EXPECT_NEAR(s(0), 3.0, 1e-14);
    EXPECT_NEAR(s(2), 1.0, 1e-14);
}
