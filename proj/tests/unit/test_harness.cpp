#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "moyal/harness/commands.hpp"
#include "moyal/moyal.hpp"

using namespace moyal;
using namespace moyal::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("moyal_harness_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, DefaultsAndAuto) {
    const auto c = parse_config("# comment only\n\nN = 32\nL = auto\ntheta0 = 2\n");
    EXPECT_EQ(c.d, 2);
    EXPECT_EQ(c.n, 32);
    EXPECT_FALSE(c.length.has_value());
    const GridSpec g = c.grid();
    EXPECT_EQ(g.boundary, Boundary::torus);
    EXPECT_TRUE(phase_compatible(g, c.theta()));
    const auto e = echo(c);
    EXPECT_NE(e.at("L").find("(auto)"), std::string::npos);
    EXPECT_EQ(e.at("theta0"), "2");

    const auto d = parse_config("N = 64\nL = 16\ntheta0 = auto\n");
    EXPECT_TRUE(phase_compatible(d.grid(), d.theta()));
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config("Nx = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("N = 32\nN = 64\n"), ConfigError);
    EXPECT_THROW(parse_config("N =\n"), ConfigError);
    EXPECT_THROW(parse_config("just text\n"), ConfigError);
    EXPECT_THROW(parse_config("N = 63\n"), ConfigError);
    EXPECT_THROW(parse_config("theta0 = two\n"), ConfigError);
    EXPECT_THROW(parse_config("L = auto\ntheta0 = auto\n"), ConfigError);
    EXPECT_THROW(parse_config("N = 32\nL = 16\ntheta0 = 2\n"), ConfigError);  // torus phase incompatible
    EXPECT_THROW(parse_config("symbol = hat\n"), ConfigError);
    EXPECT_THROW(parse_config("d = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("invariance.shifts = 1,0; 2\n"), ConfigError);
    EXPECT_THROW(parse_config("boundary = sphere\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/moyal.cfg"), ConfigError);
    try {
        parse_config("estimator.fraction = 1.5\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("estimator.fraction"), std::string::npos);
    }
}

TEST(Config, ListsAndSymbols) {
    const auto c = parse_config("invariance.shifts = 1,0; 0,2; -3,1\nsweep.N = 32, 48\nsymbol = square\nsymbol.of = gaussian\n");
    ASSERT_EQ(c.shifts.size(), 3u);
    EXPECT_EQ(c.shifts[2], (std::vector<int>{-3, 1}));
    EXPECT_EQ(c.sweep_n, (std::vector<int>{32, 48}));
    const GridSpec g{2, 16, 8.0, Boundary::open_box};
    const ThetaMatrix th = make_theta(2, 2.0);
    const Symbol sq = make_symbol(c.symbol, g, th);
    const Symbol expect = moyal_square(gaussian(g, 1.0), th);
    for (std::size_t i = 0; i < sq.values.size(); ++i) EXPECT_EQ(sq.values[i], expect.values[i]);
}

TEST(Resources, Ceiling) {
    const auto big = parse_config("N = 128\nL = auto\ntheta0 = 2\n");
    EXPECT_THROW(check_resources(big, false), ConfigError);
    EXPECT_NO_THROW(check_resources(big, true));
    const auto sweep = parse_config("sweep.N = 32, 80\nL = auto\ntheta0 = 2\n");
    EXPECT_THROW(check_resources(sweep, false), ConfigError);
    EXPECT_NO_THROW(check_resources(parse_config("N = 64\n"), false));
}

TEST(Commands, Table) {
    for (const char* name : {"verify-algebra", "verify-calculus", "verify-blocks", "verify-traces", "verify-kernel", "cif", "sweep"})
        EXPECT_EQ(commands().count(name), 1u) << name;
    EXPECT_THROW(run("verify-everything", ExperimentConfig{}), ConfigError);
}

TEST(Emit, EmptyReport) {
    const fs::path dir = scratch("empty");
    emit(RunReport{}, dir);
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_TRUE(j.at("checks").empty());
    EXPECT_TRUE(fs::exists(dir / "timings.json"));
    fs::remove_all(dir);
}

TEST(Emit, NonFiniteNumbersAreStrings) {
    EXPECT_EQ(number(INFINITY), "inf");
    EXPECT_EQ(number(-INFINITY), "-inf");
    EXPECT_EQ(number(NAN), "nan");
    EXPECT_EQ(number(1.5), 1.5);
}

TEST(Emit, RepeatedRunIsByteIdentical) {
    const auto c = parse_config("kernel.count = 4\nseed = 3\n");
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    emit(run("verify-kernel", c), a);
    emit(run("verify-kernel", c), b);
    const std::string ra = slurp(a / "report.json"), rb = slurp(b / "report.json");
    EXPECT_FALSE(ra.empty());
    EXPECT_EQ(ra, rb);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cif, ZeroSymbolPasses) {
    const auto c = parse_config("N = 16\nL = auto\ntheta0 = 2\nsymbol = zero\ncif.invariance = false\n");
    const RunReport r = run("cif", c);
    EXPECT_TRUE(r.all_passed());
    ASSERT_FALSE(r.estimates.empty());
    EXPECT_EQ(r.estimates[0].estimate.limit, 0.0);
}

TEST(Cif, Linearity) {
    const auto c = parse_config(
        "N = 16\nL = auto\ntheta0 = 2\nsymbol = square\nsymbol.of = gaussian\ncif.invariance = false\ncif.zero_trace = false\n"
        "cif.linearity = true\n");
    const RunReport r = run("cif", c);
    bool found = false;
    for (const auto& ch : r.checks)
        if (ch.name.rfind("linearity", 0) == 0) {
            found = true;
            EXPECT_TRUE(ch.passed) << ch.measured << " vs " << ch.tolerance;
        }
    EXPECT_TRUE(found);
}

TEST(Sweep, OneSpectrumFilePerGrid) {
    const auto c = parse_config("boundary = open-box\nL = 8\ntheta0 = 2\nsymbol = square\nsymbol.of = gaussian\nsweep.N = 8, 12\n");
    const fs::path dir = scratch("sweep");
    emit(run("sweep", c), dir);
    for (int n : {8, 12}) {
        const fs::path p = dir / "spectra" / ("cwikel_smooth_N" + std::to_string(n) + ".csv");
        ASSERT_TRUE(fs::exists(p)) << p;
        std::map<std::string, std::string> meta;
        const auto s = trace::read_spectrum_csv(p.string(), &meta);
        EXPECT_EQ(s.count(), static_cast<std::size_t>(n * n));
        EXPECT_EQ(meta.at("variant"), "smooth");
        EXPECT_EQ(meta.count("grid"), 1u);
    }
    fs::remove_all(dir);
}
