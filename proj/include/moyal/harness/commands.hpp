#pragma once

#include <functional>
#include <map>
#include <string>

#include "moyal/harness/cif.hpp"
#include "moyal/harness/config.hpp"
#include "moyal/harness/report.hpp"
#include "moyal/harness/suites_calculus.hpp"
#include "moyal/harness/suites_core.hpp"
#include "moyal/harness/suites_spectral.hpp"
#include "moyal/harness/suites_trace.hpp"

namespace moyal::harness {

using Command = std::function<RunReport(const ExperimentConfig&)>;

inline const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table = {
        {"verify-algebra",
         [](const ExperimentConfig& c) {
             RunReport r = algebra_suite(c);
             r.append(l2_suite(c));
             if (c.d == 2) r.append(fock_suite(c));
             return r;
         }},
        {"verify-calculus",
         [](const ExperimentConfig& c) {
             RunReport r = calculus_suite(c);
             r.append(sobolev_suite(c));
             return r;
         }},
        {"verify-blocks", block_suite},
        {"verify-traces", trace_suite},
        {"verify-kernel", kernel_suite},
        {"cif", cif_suite},
        {"sweep",
         [](const ExperimentConfig& c) { return c.sweep_experiment == "cif" ? cif_sweep(c) : cwikel_sweep(c); }},
    };
    return table;
}

inline RunReport run(const std::string& command, const ExperimentConfig& c) {
    const auto it = commands().find(command);
    if (it == commands().end()) throw ConfigError("command", "unknown command '" + command + "'");
    RunReport r = it->second(c);
    r.command = command;
    r.config = echo(c);
    return r;
}

}  // namespace moyal::harness
