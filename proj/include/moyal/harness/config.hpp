#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "moyal/core/error.hpp"
#include "moyal/core/grid.hpp"
#include "moyal/core/theta.hpp"
#include "moyal/spectral/cwikel.hpp"

namespace moyal::harness {

struct SymbolSpec {
    std::string family = "gaussian";  // gaussian | matrix-unit | square | lattice-delta | bump | product-bump | zero
    std::string of = "gaussian";      // base family of a square
    double sigma = 1.0;
    std::vector<double> center;
    int k = 0;
    int l = 0;
    std::vector<int> s0;
    double radius = 2.0;
    double scale = 1.0;
};

struct ExperimentConfig {
    int d = 2;
    int n = 64;
    std::optional<double> length = 16.0;  // nullopt = auto
    Boundary boundary = Boundary::torus;
    std::optional<double> theta0;  // nullopt = auto
    int compat = 1;
    int fock_m = 64;
    int fock_n = 64;
    double fock_l = 16.0;
    SymbolSpec symbol;
    spectral::Variant variant = spectral::Variant::smooth;
    std::size_t n_min = 4;
    double cap_fraction = 0.6;
    double relative_tol = 0.1;
    std::vector<int> sweep_n;
    std::string sweep_experiment = "cwikel";
    double reference_radius = 2.0;
    std::vector<std::vector<int>> shifts;
    bool cif_invariance = true;
    bool cif_zero_trace = true;
    bool cif_linearity = false;
    int blocks_side = 9;
    int blocks_ppu = 4;
    int kernel_count = 20;
    std::size_t trace_count = 1000000;
    std::uint64_t seed = 1;
    std::string out = "out";

    // grid with L and theta0 resolved for n points per axis
    GridSpec grid_for(int points) const {
        GridSpec g{d, points, 1.0, boundary};
        if (length) g.length = *length;
        else g.length = compatible_length(points, *theta0, compat);
        validate(g);
        return g;
    }

    GridSpec grid() const { return grid_for(n); }

    double theta0_for(int points) const {
        if (theta0) return *theta0;
        return compatible_theta0(grid_for_length(points), compat);
    }

    ThetaMatrix theta_for(int points) const { return make_theta(d, theta0_for(points)); }
    ThetaMatrix theta() const { return theta_for(n); }

    GridSpec fock_grid() const { return {2, fock_n, fock_l, Boundary::open_box}; }

private:
    GridSpec grid_for_length(int points) const { return {d, points, *length, boundary}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a real number, got '" + v + "'");
    }
}

inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
}

inline std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& item : split(v, ',')) out.push_back(static_cast<int>(to_int(key, item)));
    return out;
}

inline std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
    return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

}  // namespace detail

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "d", "N", "L", "boundary", "theta0", "m", "M", "fock.N", "fock.L", "symbol", "symbol.of", "symbol.sigma", "symbol.center",
        "symbol.k", "symbol.l", "symbol.s0", "symbol.radius", "symbol.scale", "variant", "estimator.n_min", "estimator.fraction",
        "estimator.relative_tol", "sweep.N", "sweep.experiment", "reference.radius", "invariance.shifts", "cif.invariance",
        "cif.zero_trace", "cif.linearity", "blocks.side", "blocks.ppu", "kernel.count", "traces.count", "seed", "out"};
    return keys;
}

inline void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

inline ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
        if (kv.count(key)) throw ConfigError(key, "duplicate key");
        if (value.empty()) throw ConfigError(key, "empty value");
        kv[key] = value;
    }

    ExperimentConfig c;
    auto has = [&](const char* k) { return kv.count(k) > 0; };
    using namespace detail;
    if (has("d")) c.d = static_cast<int>(to_int("d", kv["d"]));
    require(c.d > 0 && c.d % 2 == 0, "d", "must be even and positive");
    if (has("N")) c.n = static_cast<int>(to_int("N", kv["N"]));
    require(c.n >= 4 && c.n % 2 == 0, "N", "must be even and at least 4");
    if (has("boundary")) {
        const auto& b = kv["boundary"];
        require(b == "torus" || b == "open-box", "boundary", "must be torus or open-box");
        c.boundary = b == "torus" ? Boundary::torus : Boundary::open_box;
    }
    if (has("m")) c.compat = static_cast<int>(to_int("m", kv["m"]));
    require(c.compat >= 1, "m", "must be a positive integer");
    if (has("L")) c.length = kv["L"] == "auto" ? std::nullopt : std::optional<double>(to_double("L", kv["L"]));
    if (c.length) require(*c.length > 0.0, "L", "must be positive");
    if (has("theta0")) c.theta0 = kv["theta0"] == "auto" ? std::nullopt : std::optional<double>(to_double("theta0", kv["theta0"]));
    if (c.theta0) require(*c.theta0 > 0.0, "theta0", "must be positive");
    require(c.length || c.theta0, "L", "L and theta0 cannot both be auto");
    if (c.length && c.theta0 && c.boundary == Boundary::torus) {
        const GridSpec g{c.d, c.n, *c.length, c.boundary};
        require(phase_compatible(g, make_theta(c.d, *c.theta0)), "theta0",
                "torus mode needs theta0*spacing*L/2 in 2*pi*Z; set theta0 = auto or L = auto");
    }
    if (has("M")) c.fock_m = static_cast<int>(to_int("M", kv["M"]));
    require(c.fock_m >= 2, "M", "must be at least 2");
    if (has("fock.N")) c.fock_n = static_cast<int>(to_int("fock.N", kv["fock.N"]));
    require(c.fock_n >= 4 && c.fock_n % 2 == 0, "fock.N", "must be even and at least 4");
    if (has("fock.L")) c.fock_l = to_double("fock.L", kv["fock.L"]);
    require(c.fock_l > 0.0, "fock.L", "must be positive");

    static const std::set<std::string> families = {"gaussian", "matrix-unit", "square", "lattice-delta", "bump", "product-bump", "zero"};
    if (has("symbol")) c.symbol.family = kv["symbol"];
    require(families.count(c.symbol.family) > 0, "symbol", "unknown family '" + c.symbol.family + "'");
    if (has("symbol.of")) c.symbol.of = kv["symbol.of"];
    require(families.count(c.symbol.of) > 0 && c.symbol.of != "square", "symbol.of", "must name a non-square family");
    if (has("symbol.sigma")) c.symbol.sigma = to_double("symbol.sigma", kv["symbol.sigma"]);
    require(c.symbol.sigma > 0.0, "symbol.sigma", "must be positive");
    if (has("symbol.center")) c.symbol.center = to_doubles("symbol.center", kv["symbol.center"]);
    require(c.symbol.center.empty() || static_cast<int>(c.symbol.center.size()) == c.d, "symbol.center", "needs d components");
    if (has("symbol.k")) c.symbol.k = static_cast<int>(to_int("symbol.k", kv["symbol.k"]));
    if (has("symbol.l")) c.symbol.l = static_cast<int>(to_int("symbol.l", kv["symbol.l"]));
    require(c.symbol.k >= 0, "symbol.k", "must be nonnegative");
    require(c.symbol.l >= 0, "symbol.l", "must be nonnegative");
    if (has("symbol.s0")) c.symbol.s0 = to_ints("symbol.s0", kv["symbol.s0"]);
    if (c.symbol.family == "lattice-delta" || c.symbol.of == "lattice-delta")
        require(static_cast<int>(c.symbol.s0.size()) == c.d, "symbol.s0", "needs d integer lattice steps");
    if (has("symbol.radius")) c.symbol.radius = to_double("symbol.radius", kv["symbol.radius"]);
    require(c.symbol.radius > 0.0, "symbol.radius", "must be positive");
    if (has("symbol.scale")) c.symbol.scale = to_double("symbol.scale", kv["symbol.scale"]);

    if (has("variant")) {
        const auto& v = kv["variant"];
        require(v == "smooth" || v == "floor" || v == "power", "variant", "must be smooth, floor or power");
        c.variant = v == "smooth" ? spectral::Variant::smooth : v == "floor" ? spectral::Variant::floor : spectral::Variant::power;
    }
    if (has("estimator.n_min")) c.n_min = static_cast<std::size_t>(to_int("estimator.n_min", kv["estimator.n_min"]));
    require(c.n_min >= 1, "estimator.n_min", "must be positive");
    if (has("estimator.fraction")) c.cap_fraction = to_double("estimator.fraction", kv["estimator.fraction"]);
    require(c.cap_fraction > 0.0 && c.cap_fraction <= 1.0, "estimator.fraction", "must lie in (0, 1]");
    if (has("estimator.relative_tol")) c.relative_tol = to_double("estimator.relative_tol", kv["estimator.relative_tol"]);
    require(c.relative_tol > 0.0, "estimator.relative_tol", "must be positive");

    if (has("sweep.N")) c.sweep_n = to_ints("sweep.N", kv["sweep.N"]);
    for (int v : c.sweep_n) require(v >= 4 && v % 2 == 0, "sweep.N", "entries must be even and at least 4");
    if (has("sweep.experiment")) c.sweep_experiment = kv["sweep.experiment"];
    require(c.sweep_experiment == "cwikel" || c.sweep_experiment == "cif", "sweep.experiment", "must be cwikel or cif");
    if (has("reference.radius")) c.reference_radius = to_double("reference.radius", kv["reference.radius"]);
    require(c.reference_radius > 0.0, "reference.radius", "must be positive");
    if (has("invariance.shifts"))
        for (const auto& item : split(kv["invariance.shifts"], ';')) {
            c.shifts.push_back(to_ints("invariance.shifts", item));
            require(static_cast<int>(c.shifts.back().size()) == c.d, "invariance.shifts", "each shift needs d integer steps");
        }
    if (has("cif.invariance")) c.cif_invariance = to_bool("cif.invariance", kv["cif.invariance"]);
    if (has("cif.zero_trace")) c.cif_zero_trace = to_bool("cif.zero_trace", kv["cif.zero_trace"]);
    if (has("cif.linearity")) c.cif_linearity = to_bool("cif.linearity", kv["cif.linearity"]);
    if (has("blocks.side")) c.blocks_side = static_cast<int>(to_int("blocks.side", kv["blocks.side"]));
    if (has("blocks.ppu")) c.blocks_ppu = static_cast<int>(to_int("blocks.ppu", kv["blocks.ppu"]));
    require(c.blocks_side >= 3, "blocks.side", "must be at least 3");
    require(c.blocks_ppu >= 1 && (c.blocks_side * c.blocks_ppu) % 2 == 0, "blocks.ppu", "side * ppu must be even");
    if (has("kernel.count")) c.kernel_count = static_cast<int>(to_int("kernel.count", kv["kernel.count"]));
    require(c.kernel_count >= 1, "kernel.count", "must be positive");
    if (has("traces.count")) c.trace_count = static_cast<std::size_t>(to_int("traces.count", kv["traces.count"]));
    require(c.trace_count >= 256, "traces.count", "must be at least 256");
    if (has("seed")) c.seed = static_cast<std::uint64_t>(to_int("seed", kv["seed"]));
    if (has("out")) c.out = kv["out"];
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config", "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

// resolved values
inline std::map<std::string, std::string> echo(const ExperimentConfig& c) {
    std::map<std::string, std::string> e;
    e["d"] = std::to_string(c.d);
    e["N"] = std::to_string(c.n);
    const GridSpec g = c.grid();
    e["L"] = format_double(g.length) + (c.length ? "" : " (auto)");
    e["theta0"] = format_double(c.theta0_for(c.n)) + (c.theta0 ? "" : " (auto)");
    e["boundary"] = to_string(c.boundary);
    e["m"] = std::to_string(c.compat);
    e["M"] = std::to_string(c.fock_m);
    e["fock.N"] = std::to_string(c.fock_n);
    e["fock.L"] = format_double(c.fock_l);
    e["symbol"] = c.symbol.family;
    e["symbol.of"] = c.symbol.of;
    e["symbol.sigma"] = format_double(c.symbol.sigma);
    e["symbol.center"] = join(c.symbol.center);
    e["symbol.k"] = std::to_string(c.symbol.k);
    e["symbol.l"] = std::to_string(c.symbol.l);
    e["symbol.s0"] = join(c.symbol.s0);
    e["symbol.radius"] = format_double(c.symbol.radius);
    e["symbol.scale"] = format_double(c.symbol.scale);
    e["variant"] = spectral::to_string(c.variant);
    e["estimator.n_min"] = std::to_string(c.n_min);
    e["estimator.fraction"] = format_double(c.cap_fraction);
    e["estimator.relative_tol"] = format_double(c.relative_tol);
    e["sweep.N"] = join(c.sweep_n);
    e["sweep.experiment"] = c.sweep_experiment;
    e["reference.radius"] = format_double(c.reference_radius);
    std::vector<std::string> shifts;
    for (const auto& s : c.shifts) shifts.push_back(join(s));
    e["invariance.shifts"] = join(shifts, ";");
    e["cif.invariance"] = c.cif_invariance ? "true" : "false";
    e["cif.zero_trace"] = c.cif_zero_trace ? "true" : "false";
    e["cif.linearity"] = c.cif_linearity ? "true" : "false";
    e["blocks.side"] = std::to_string(c.blocks_side);
    e["blocks.ppu"] = std::to_string(c.blocks_ppu);
    e["kernel.count"] = std::to_string(c.kernel_count);
    e["traces.count"] = std::to_string(c.trace_count);
    e["seed"] = std::to_string(c.seed);
    return e;
}

// dense N^d x N^d decompositions above 4096 need --force
inline void check_resources(const ExperimentConfig& c, bool force) {
    if (force) return;
    auto dim = [&](int n) {
        double p = 1;
        for (int k = 0; k < c.d; ++k) p *= n;
        return p;
    };
    if (dim(c.n) > 4096) throw ConfigError("N", "N^d = " + std::to_string(static_cast<long long>(dim(c.n))) + " exceeds the 4096 ceiling; pass --force");
    for (int n : c.sweep_n)
        if (dim(n) > 4096) throw ConfigError("sweep.N", "entry " + std::to_string(n) + " exceeds the 4096 ceiling; pass --force");
}

}  // namespace moyal::harness
