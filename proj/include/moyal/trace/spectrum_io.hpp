#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "moyal/core/error.hpp"
#include "moyal/trace/spectrum.hpp"

namespace moyal::trace {

// "# key: value" metadata rows, then k,mu_k[,eigenvalue_k]
inline void write_spectrum_csv(std::ostream& os, const SingularSpectrum& s, const std::map<std::string, std::string>& meta) {
    validate(s);
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
    os << (s.has_eigenvalues() ? "k,mu_k,eigenvalue_k\n" : "k,mu_k\n");
    os.precision(17);
    for (std::size_t k = 0; k < s.count(); ++k) {
        os << k << "," << s.values[k];
        if (s.has_eigenvalues()) os << "," << s.eigenvalues[k];
        os << "\n";
    }
}

inline void write_spectrum_csv(const std::string& path, const SingularSpectrum& s, const std::map<std::string, std::string>& meta) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    write_spectrum_csv(os, s, meta);
    if (!os) throw IoError("short write to " + path);
}

inline SingularSpectrum read_spectrum_csv(std::istream& is, std::map<std::string, std::string>* meta = nullptr) {
    SingularSpectrum s;
    std::string line;
    bool header = false, eig = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (meta && colon != std::string::npos) {
                const auto v = line.find_first_not_of(' ', colon + 1);
                (*meta)[line.substr(2, colon - 2)] = v == std::string::npos ? "" : line.substr(v);
            }
            continue;
        }
        if (!header) {
            if (line.rfind("k,mu_k", 0) != 0) throw IoError("spectrum csv: missing k,mu_k header");
            eig = line.find("eigenvalue_k") != std::string::npos;
            header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string k, mu, ev;
        std::getline(ls, k, ',');
        std::getline(ls, mu, ',');
        try {
            s.values.push_back(std::stod(mu));
            if (eig) {
                std::getline(ls, ev, ',');
                s.eigenvalues.push_back(std::stod(ev));
            }
        } catch (const std::exception&) {
            throw IoError("spectrum csv: malformed row '" + line + "'");
        }
    }
    if (!header) throw IoError("spectrum csv: empty input");
    validate(s);
    if (meta && meta->count("source")) s.source = meta->at("source");
    return s;
}

inline SingularSpectrum read_spectrum_csv(const std::string& path, std::map<std::string, std::string>* meta = nullptr) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path);
    return read_spectrum_csv(is, meta);
}

}  // namespace moyal::trace
