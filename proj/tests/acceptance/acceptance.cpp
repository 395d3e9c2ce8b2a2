// Acceptance run: one line per criterion, exit status 1 if any criterion fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "moyal/harness/commands.hpp"
#include "moyal/moyal.hpp"

namespace {

using namespace moyal::harness;

struct Criterion {
    int id;
    std::string title;
    double budget;  // seconds
    std::function<RunReport()> run;
};

ExperimentConfig config(const std::string& text) { return parse_config(text); }

RunReport only(const RunReport& r, const std::vector<std::string>& prefixes) {
    RunReport out = r;
    out.checks.clear();
    for (const auto& c : r.checks)
        for (const auto& p : prefixes)
            if (c.name.rfind(p, 0) == 0) {
                out.checks.push_back(c);
                break;
            }
    return out;
}

double ratio(const Check& c) {
    if (c.tolerance > 0.0) return std::abs(c.measured) / c.tolerance;
    return c.measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// the failing check, else the one closest to its tolerance
const Check* headline(const RunReport& r) {
    const Check* worst = nullptr;
    for (const auto& c : r.checks) {
        if (!c.passed) return &c;
        if (!worst || ratio(c) > ratio(*worst)) worst = &c;
    }
    return worst;
}

const char* cif_base = R"(
d = 2
boundary = torus
theta0 = 2
M = 64
symbol = square
symbol.of = gaussian
symbol.sigma = 1
variant = smooth
estimator.n_min = 4
estimator.fraction = 0.6
reference.radius = 2
invariance.shifts = 1,0; 0,2; -3,1
)";

std::vector<Criterion> criteria() {
    return {
        {1, "algebra exactness, torus N = 32", 10,
         [] { return algebra_suite(config("N = 32\nL = auto\nboundary = torus\ntheta0 = 2\nseed = 7\n")); }},
        {2, "L2 isometry, Gaussian, N = 64, L = 16", 30,
         [] { return l2_suite(config("N = 64\nL = 16\ntheta0 = auto\nboundary = torus\nsymbol = gaussian\n")); }},
        {3, "matrix units k,l <= 3, M = 32 and 64", 120,
         [] {
             return only(fock_suite(config("N = 32\nL = auto\ntheta0 = 2\nM = 64\n")), {"matrix unit"});
         }},
        {4, "Fourier multiplier dual route, 3 symbols", 120,
         [] {
             return only(multiplier_suite(config("N = 32\nL = auto\ntheta0 = 2\nboundary = torus\nM = 64\n")), {"Fourier multiplier"});
         }},
        {5, "Sobolev W^{2,1} translation isometry", 120,
         [] { return sobolev_suite(config("N = 32\nL = auto\ntheta0 = 2\nM = 64\nsymbol = gaussian\n")); }},
        {6, "block decomposition, box side 9", 300,
         [] { return block_suite(config("L = auto\ntheta0 = 2\nblocks.side = 9\nblocks.ppu = 4\n")); }},
        {7, "kernel trace-norm bound, 20 kernels", 60, [] { return kernel_suite(config("kernel.count = 20\nseed = 7\n")); }},
        {8, "tensor Dixmier factorization, count 1e6", 30,
         [] {
             const auto harm = harmonic_spectrum(1000000);
             return tensor_checks(harm, moyal::trace::dixmier_estimate(harm));
         }},
        {9, "direct-sum merge, dim 1500", 60, [] { return direct_sum_checks(7); }},
        {10, "Cwikel surrogates, N = 32/48/64", 900,
         [] {
             const auto c = config("boundary = open-box\nL = 16\ntheta0 = 2\nsymbol = square\nsymbol.of = gaussian\nsweep.N = 32, 48, 64\n");
             return only(cwikel_sweep(c), {"weak quasinorm", "trace norm of x"});
         }},
        {11, "CIF trend, x = y^* y, N = 32/48/64", 1200,
         [] { return cif_sweep(config(std::string(cif_base) + "L = auto\nsweep.N = 32, 48, 64\n")); }},
        {12, "invariance under 3 lattice translations, N = 64", 1200,
         [] {
             const auto c = config(std::string(cif_base) + "N = 64\nL = auto\n");
             RunReport r;
             cif_invariance(r, c, cif_run(c, c.n));
             return r;
         }},
        {13, "zero-trace null check, N = 64", 600,
         [] {
             const auto c = config(std::string(cif_base) + "N = 64\nL = auto\n");
             RunReport r;
             cif_zero_trace(r, c, cif_run(c, c.n));
             return r;
         }},
    };
}

}  // namespace

int main() {
    int failed = 0;
    for (const auto& c : criteria()) {
        Stopwatch sw;
        RunReport r;
        std::string error;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double t = sw.seconds();
        const bool in_time = t < c.budget;
        const bool ok = error.empty() && !r.checks.empty() && r.all_passed() && in_time;
        if (!ok) ++failed;
        std::string what;
        if (!error.empty()) {
            what = "error: " + error;
        } else if (const Check* h = headline(r)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " %.3g (tol %.3g)", h->measured, h->tolerance);
            what = std::to_string(r.checks.size()) + " checks; " + (h->passed ? "tightest: " : "failed: ") + h->name + buf;
        } else {
            what = "no checks ran";
        }
        std::printf("AC-%02d %s  %-50s %6.1f s / %4.0f s%s  %s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), t, c.budget,
                    in_time ? "" : " (over budget)", what.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 13 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
