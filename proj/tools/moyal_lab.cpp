#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "moyal/harness/commands.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moyal-lab: numerical checks on the Moyal plane"};
    std::string command, config_path, out_dir;
    bool force = false;
    std::string names;
    for (const auto& [name, fn] : moyal::harness::commands()) names += (names.empty() ? "" : ", ") + name;
    app.add_option("command", command, "one of: " + names)->required();
    app.add_option("--config", config_path, "flat key = value config file")->required();
    app.add_option("--out", out_dir, "output directory (default: the config's out key)");
    app.add_flag("--force", force, "allow dense problems above the N^d = 4096 ceiling");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }

    moyal::harness::ExperimentConfig cfg;
    try {
        cfg = moyal::harness::load_config(config_path);
        moyal::harness::check_resources(cfg, force);
        if (!moyal::harness::commands().count(command)) throw moyal::ConfigError("command", "unknown command '" + command + "'");
    } catch (const moyal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    if (out_dir.empty()) out_dir = cfg.out;

    moyal::harness::RunReport report;
    try {
        report = moyal::harness::run(command, cfg);
    } catch (const moyal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const moyal::ResolutionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }

    try {
        moyal::harness::emit(report, out_dir);
    } catch (const moyal::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    for (const auto& c : report.checks)
        std::printf("%s  %-90s measured %.3g (tolerance %.3g)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.tolerance);
    for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("%zu checks, report in %s\n", report.checks.size(), (std::filesystem::path(out_dir) / "report.json").c_str());
    return report.all_passed() ? exit_pass : exit_fail;
}
