#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "moyal/core/error.hpp"
#include "moyal/trace/estimator.hpp"
#include "moyal/trace/spectrum_io.hpp"

namespace moyal::harness {

struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct NamedEstimate {
    std::string name;
    trace::TraceEstimate estimate;
    std::map<std::string, double> extra;  // reference values next to the estimate
};

struct NamedSpectrum {
    std::string name;
    trace::SingularSpectrum spectrum;
    std::map<std::string, std::string> meta;
};

struct RunReport {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<Check> checks;
    std::vector<NamedEstimate> estimates;
    std::vector<NamedSpectrum> spectra;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> timings;  // seconds, kept out of report.json

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    // |measured| <= tolerance; NaN fails
    Check& check_le(std::string name, double measured, double tolerance, std::string detail = "") {
        checks.push_back({std::move(name), std::abs(measured) <= tolerance, measured, tolerance, std::move(detail)});
        return checks.back();
    }

    Check& check(std::string name, bool passed, double measured, double tolerance, std::string detail = "") {
        checks.push_back({std::move(name), passed, measured, tolerance, std::move(detail)});
        return checks.back();
    }

    void append(const RunReport& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
        estimates.insert(estimates.end(), o.estimates.begin(), o.estimates.end());
        spectra.insert(spectra.end(), o.spectra.begin(), o.spectra.end());
        warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
        timings.insert(timings.end(), o.timings.begin(), o.timings.end());
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_;
};

// JSON cannot carry inf/nan; they become strings
inline nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline nlohmann::json estimate_json(const trace::TraceEstimate& e) {
    nlohmann::json j;
    j["limit"] = number(e.limit);
    j["error_bar"] = number(e.error_bar);
    j["window_variation"] = number(e.window_variation);
    j["n_grid"] = e.n_grid();
    j["residual"] = number(e.residual);
    j["slope"] = number(e.slope);
    j["measurable"] = e.measurable;
    j["diagnostic"] = number(trace::measurability_diagnostic(e));
    return j;
}

inline std::string spectrum_path(const NamedSpectrum& s) { return "spectra/" + s.name + ".csv"; }
inline std::string estimate_path(const NamedEstimate& e) { return "estimates/" + e.name + ".json"; }
inline std::string plot_path(const NamedEstimate& e) { return "plotdata/" + e.name + ".csv"; }

inline nlohmann::json report_json(const RunReport& r) {
    nlohmann::json j;
    j["command"] = r.command;
    j["config"] = r.config;
    nlohmann::json checks = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", number(c.measured)}, {"tolerance", number(c.tolerance)}, {"detail", c.detail}});
        passed += c.passed ? 1 : 0;
    }
    j["checks"] = checks;
    nlohmann::json est = nlohmann::json::array();
    for (const auto& e : r.estimates) {
        nlohmann::json x = estimate_json(e.estimate);
        x["name"] = e.name;
        for (const auto& [k, v] : e.extra) x[k] = number(v);
        est.push_back(x);
    }
    j["estimates"] = est;
    nlohmann::json art = nlohmann::json::array();
    for (const auto& s : r.spectra) art.push_back(spectrum_path(s));
    for (const auto& e : r.estimates) {
        art.push_back(estimate_path(e));
        art.push_back(plot_path(e));
    }
    art.push_back("timings.json");
    j["artifacts"] = art;
    j["warnings"] = r.warnings;
    j["summary"] = {{"checks", r.checks.size()}, {"passed", passed}, {"failed", r.checks.size() - passed}, {"all_passed", r.all_passed()}};
    return j;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    os << text;
    if (!os) throw IoError("short write to " + p.string());
}

// report.json, timings.json, spectra/*.csv, estimates/*.json, plotdata/*.csv
inline void emit(const RunReport& r, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    for (const char* sub : {"", "spectra", "estimates", "plotdata"}) {
        fs::create_directories(dir / sub, ec);
        if (ec) throw IoError("cannot create " + (dir / sub).string() + ": " + ec.message());
    }
    write_text(dir / "report.json", report_json(r).dump(2) + "\n");
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [stage, sec] : r.timings) t.push_back({{"stage", stage}, {"seconds", sec}});
    write_text(dir / "timings.json", t.dump(2) + "\n");
    for (const auto& s : r.spectra) trace::write_spectrum_csv((dir / spectrum_path(s)).string(), s.spectrum, s.meta);
    for (const auto& e : r.estimates) {
        nlohmann::json x = estimate_json(e.estimate);
        for (const auto& [k, v] : e.extra) x[k] = number(v);
        write_text(dir / estimate_path(e), x.dump(2) + "\n");
        std::ostringstream os;
        os.precision(17);
        os << "n,D_n,window_mean\n";
        const auto& raw = e.estimate.raw_means;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            os << raw[i].first << "," << raw[i].second << ",";
            if (i < e.estimate.window_means.size()) os << e.estimate.window_means[i];
            os << "\n";
        }
        write_text(dir / plot_path(e), os.str());
    }
}

}  // namespace moyal::harness
