#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "moyal/harness/suites_trace.hpp"
#include "moyal/moyal.hpp"

using namespace moyal;
using namespace moyal::trace;

namespace {

const SingularSpectrum& harmonic() {
    static const SingularSpectrum h = harness::harmonic_spectrum(1000000);
    return h;
}

SingularSpectrum oscillating(std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) {
        const int j = static_cast<int>(std::floor(std::log2(k + 1.0)));
        v[k] = (2.0 + (j % 2 == 0 ? 1.0 : -1.0)) / (k + 1.0);
    }
    return from_values(v);
}

}  // namespace

TEST(Spectrum, ConstructionAndValidation) {
    const auto s = from_values({1.0, 3.0, 2.0});
    EXPECT_EQ(s.values, (std::vector<double>{3.0, 2.0, 1.0}));
    EXPECT_THROW(from_values({1.0, -0.5}), DomainError);
    EXPECT_THROW(from_values({1.0, NAN}), DomainError);
    const auto e = from_eigenvalues({0.5, -2.0, 1.0});
    EXPECT_EQ(e.values, (std::vector<double>{2.0, 1.0, 0.5}));
    EXPECT_EQ(e.eigenvalues, (std::vector<double>{-2.0, 1.0, 0.5}));
    EXPECT_THROW(validate(SingularSpectrum{{1.0, 2.0}, {}, ""}), DomainError);
}

TEST(WeakQuasinorm, Examples) {
    EXPECT_NEAR(weak_quasinorm(harness::harmonic_spectrum(1000)), 1.0, 1e-15);
    EXPECT_EQ(weak_quasinorm(from_values({2.0, 0.0, 0.0})), 2.0);
    const auto s = from_values({0.9, 0.4, 0.3, 0.05});
    EXPECT_NEAR(weak_quasinorm(scaled(s, 2.5)), 2.5 * weak_quasinorm(s), 1e-15);
}

TEST(LogCesaro, ZeroAndHarmonic) {
    EXPECT_EQ(log_cesaro(SingularSpectrum{std::vector<double>(100, 0.0), {}, ""}, 50), 0.0);
    const std::size_t n = 999999;
    // direct summation in extended precision, smallest terms first
    long double h = 0.0L;
    for (std::size_t k = n + 1; k >= 1; --k) h += 1.0L / static_cast<long double>(k);
    const double oracle = static_cast<double>(h / std::log(2.0L + n));
    EXPECT_NEAR(log_cesaro(harmonic(), n), oracle, 1e-12);
}

TEST(LogCesaro, FiniteRankDecays) {
    std::vector<double> v(100000, 0.0);
    for (int k = 0; k < 10; ++k) v[k] = 1.0 / (k + 1.0);
    const auto s = from_values(v);
    EXPECT_GT(log_cesaro(s, 100), log_cesaro(s, 1000));
    EXPECT_GT(log_cesaro(s, 1000), log_cesaro(s, 99999));
}

TEST(DixmierEstimate, HarmonicOscillatingTraceClass) {
    const auto eh = dixmier_estimate(harmonic());
    EXPECT_NEAR(eh.limit, 1.0, 0.02);
    EXPECT_TRUE(eh.measurable);
    EXPECT_LE(measurability_diagnostic(eh), 0.05);

    const auto eo = dixmier_estimate(oscillating(1000000));
    EXPECT_FALSE(eo.measurable);
    EXPECT_GE(measurability_diagnostic(eo), 0.2);

    std::vector<double> tc(1000000);
    for (std::size_t k = 0; k < tc.size(); ++k) tc[k] = 1.0 / std::pow(k + 1.0, 2);
    EXPECT_NEAR(dixmier_estimate(from_values(tc)).limit, 0.0, 0.01);

    EXPECT_THROW(dixmier_estimate(from_values(std::vector<double>(10, 1.0))), DomainError);
}

TEST(DixmierEstimate, SignedSequence) {
    auto s = from_eigenvalues(std::vector<double>(1024, 0.0));
    for (std::size_t k = 0; k < s.count(); ++k) s.eigenvalues[k] = s.values[k] = 1.0 / (k + 1.0);
    EstimatorOptions opt;
    opt.n_min = 4;
    opt.use_eigenvalues = true;
    const auto pos = dixmier_estimate(s, opt);
    for (auto& e : s.eigenvalues) e = -e;
    const auto neg = dixmier_estimate(s, opt);
    EXPECT_NEAR(pos.limit, -neg.limit, 1e-14);
}

TEST(Measurability, ZeroSpectrum) {
    EXPECT_EQ(measurability_diagnostic(SingularSpectrum{std::vector<double>(1024, 0.0), {}, ""}), 0.0);
}

TEST(Tensor, Examples) {
    EXPECT_EQ(tensor_spectrum({1.0}, harmonic()).values, harmonic().values);
    EXPECT_NEAR(dixmier_estimate(tensor_spectrum({0.5, 0.5}, harmonic())).limit, 1.0, 0.03);
    const double eps = 1e-6;
    EXPECT_NEAR(dixmier_estimate(tensor_spectrum({1.0, eps}, harmonic())).limit, 1.0, 2 * eps + 0.03);
    const auto small = tensor_spectrum({2.0, 1.0}, from_values({3.0, 1.0, 0.5}));
    EXPECT_EQ(small.values, (std::vector<double>{6.0, 3.0, 2.0}));
    EXPECT_THROW(tensor_spectrum({-1.0}, harmonic()), DomainError);
}

TEST(DirectSum, Examples) {
    const auto m = direct_sum_spectrum({from_values({3.0}), from_values({2.0, 1.0})});
    EXPECT_EQ(m.values, (std::vector<double>{3.0, 2.0, 1.0}));
    const auto one = from_values({0.7, 0.2, 0.1});
    EXPECT_EQ(direct_sum_spectrum({one}).values, one.values);
    EXPECT_TRUE(direct_sum_spectrum({}).values.empty());
}

TEST(DirectSum, DenseBlockDiagonalOracle) {
    const auto r = harness::direct_sum_checks(11);
    ASSERT_FALSE(r.checks.empty());
    for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.measured;
}

TEST(SpectrumCsv, RoundTrip) {
    SingularSpectrum s = from_eigenvalues({1.0 / 3.0, -0.1, 2e-300, std::nextafter(1.0, 2.0)}, "round trip");
    std::stringstream ss;
    write_spectrum_csv(ss, s, {{"grid", "d=2 N=8"}, {"theta0", "2"}});
    std::map<std::string, std::string> meta;
    const auto back = read_spectrum_csv(ss, &meta);
    EXPECT_EQ(back.values, s.values);
    EXPECT_EQ(back.eigenvalues, s.eigenvalues);
    EXPECT_EQ(meta.at("grid"), "d=2 N=8");
    EXPECT_EQ(meta.at("theta0"), "2");

    SingularSpectrum plain = from_values({0.5, 0.25});
    std::stringstream sp;
    write_spectrum_csv(sp, plain, {});
    const auto pb = read_spectrum_csv(sp);
    EXPECT_EQ(pb.values, plain.values);
    EXPECT_FALSE(pb.has_eigenvalues());
}

TEST(SpectrumCsv, MalformedInput) {
    std::stringstream empty;
    EXPECT_THROW(read_spectrum_csv(empty), IoError);
    std::stringstream no_header("0,1.0\n");
    EXPECT_THROW(read_spectrum_csv(no_header), IoError);
    std::stringstream bad_row("k,mu_k\n0,abc\n");
    EXPECT_THROW(read_spectrum_csv(bad_row), IoError);
    std::stringstream ascending("k,mu_k\n0,1\n1,2\n");
    EXPECT_THROW(read_spectrum_csv(ascending), DomainError);
    EXPECT_THROW(read_spectrum_csv(std::string("/nonexistent/spectrum.csv")), IoError);
}
