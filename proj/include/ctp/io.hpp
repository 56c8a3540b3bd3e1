#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctp/common.hpp"
#include "ctp/config.hpp"
#include "ctp/density.hpp"
#include "ctp/experiment.hpp"
#include "ctp/measure.hpp"
#include "ctp/sampling.hpp"

namespace ctp {

/// Shortest exact decimal form: 17 significant digits round-trip any
/// double bit-for-bit.
inline std::string format17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- CSV ----------------------------------------------------------------

/// Pattern table: x, total, direct, interference re/im, per-slit |phi_k|^2,
/// classical baseline total. Comma separated, LF endings.
inline void write_pattern_csv(std::ostream& os, const ScreenPattern& pat,
                              const ScreenPattern& classical)
{
    if (classical.sites != pat.sites)
        throw DomainError("pattern csv: baseline size mismatch");
    os << "x,total,direct,interference_re,interference_im";
    for (std::size_t k = 0; k < pat.slit_amps.size(); ++k)
        os << ",phi_sq_" << k + 1;
    os << ",classical_total\n";
    for (int x = 0; x < pat.sites; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        os << x << ',' << format17(pat.total[xi].real()) << ',' << format17(pat.direct[xi])
           << ',' << format17(pat.interference[xi].real()) << ','
           << format17(pat.interference[xi].imag());
        for (const auto& amp : pat.slit_amps)
            os << ',' << format17(std::norm(amp[xi]));
        os << ',' << format17(classical.total[xi].real()) << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw DomainError("csv: missing column " + name);
    }
};

inline CsvTable read_csv(std::istream& is)
{
    CsvTable table;
    std::string line;
    if (!std::getline(is, line))
        throw DomainError("csv: empty input");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        table.header.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            throw DomainError("csv: ragged row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

/// Density matrix dump: one row per x+, cells re,im per x-.
inline void write_density_csv(std::ostream& os, const DensityMatrix& rho)
{
    const int n = rho.entries.rows();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j)
                os << ',';
            os << format17(rho.entries.at(i, j).real()) << ','
               << format17(rho.entries.at(i, j).imag());
        }
        os << '\n';
    }
}

// ---- JSON ---------------------------------------------------------------

inline nlohmann::json pattern_json(const ScreenPattern& pat, const ScreenPattern& classical)
{
    nlohmann::json j;
    j["sites"] = pat.sites;
    j["slits"] = pat.slits;
    j["measured"] = pat.measured;
    std::vector<double> total, int_re, int_im, classical_total;
    for (int x = 0; x < pat.sites; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        total.push_back(pat.total[xi].real());
        int_re.push_back(pat.interference[xi].real());
        int_im.push_back(pat.interference[xi].imag());
        classical_total.push_back(classical.total[xi].real());
    }
    j["total"] = total;
    j["direct"] = pat.direct;
    j["interference_re"] = int_re;
    j["interference_im"] = int_im;
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& v : pat.slit_amps) {
        std::vector<double> mod2;
        mod2.reserve(v.size());
        for (const Complex& z : v)
            mod2.push_back(std::norm(z));
        amps.push_back(mod2);
    }
    j["phi_sq"] = amps;
    j["classical_total"] = classical_total;
    return j;
}

inline nlohmann::json report_json(const FrequencyReport& r)
{
    nlohmann::json j;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["bins"] = r.bins;
    j["counts"] = r.counts;
    j["probs"] = r.probs;
    j["p"] = r.p;
    j["deviations"] = r.deviations;
    j["bounds"] = r.bounds;
    j["pass"] = r.pass;
    return j;
}

inline nlohmann::json density_json(const DensityMatrix& rho, const DensityReport& report)
{
    nlohmann::json j;
    j["sites"] = rho.entries.rows();
    j["time"] = rho.time;
    j["rank_bound"] = rho.rank_bound;
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < rho.entries.rows(); ++i)
        for (int k = 0; k < rho.entries.cols(); ++k)
            entries.push_back({rho.entries.at(i, k).real(), rho.entries.at(i, k).imag()});
    j["entries"] = entries;
    j["report"] = {{"hermiticity_residual", report.hermiticity_residual},
                   {"min_eigenvalue", report.min_eigenvalue},
                   {"trace", report.trace},
                   {"rank", report.rank}};
    return j;
}

inline nlohmann::json axiom_report_json(const AxiomReport& r)
{
    nlohmann::json j;
    j["omega_plus"] = r.omega_plus_size;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["checks"] = r.checks;
    j["failures"] = r.failures;
    j["max_additivity_residual"] = r.max_additivity_residual;
    j["max_conjugation_residual"] = r.max_conjugation_residual;
    j["max_factorization_residual"] = r.max_factorization_residual;
    j["max_hermitian_imag"] = r.max_hermitian_imag;
    j["max_pure_relative_error"] = r.max_pure_relative_error;
    j["min_event_real"] = r.min_event_real;
    j["total_measure_residual"] = r.total_measure_residual;
    j["nonreal_witness"] = r.nonreal_witness;
    j["classification_ok"] = r.classification_ok;
    j["pass"] = r.pass;
    return j;
}

// ---- run configuration --------------------------------------------------

inline RunConfig parse_run_config(const nlohmann::json& j)
{
    RunConfig cfg;
    if (!j.contains("lattice") || !j.contains("experiment"))
        throw DomainError("config: lattice and experiment sections are required");
    const auto& lat = j.at("lattice");
    cfg.lattice.sites = lat.at("sites").get<int>();
    cfg.lattice.steps = lat.at("steps").get<int>();
    cfg.lattice.alpha = lat.at("alpha").get<double>();
    if (lat.contains("hop_range") && !lat.at("hop_range").is_null())
        cfg.lattice.hop_range = lat.at("hop_range").get<int>();
    const auto& exp = j.at("experiment");
    cfg.source = exp.at("source").get<int>();
    cfg.barrier_t = exp.at("barrier_t").get<int>();
    cfg.slits = exp.at("slits").get<std::vector<int>>();
    if (exp.contains("measured"))
        cfg.measured = exp.at("measured").get<std::vector<int>>();
    if (j.contains("sampling")) {
        const auto& s = j.at("sampling");
        if (s.contains("n"))
            cfg.samples = s.at("n").get<std::uint64_t>();
        if (s.contains("seed"))
            cfg.seed = s.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (o.contains("format"))
            cfg.format = o.at("format").get<std::string>();
        if (o.contains("path"))
            cfg.out = o.at("path").get<std::string>();
    }
    return cfg;
}

inline RunConfig load_run_config(std::istream& is)
{
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        return parse_run_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: bad field: ") + e.what());
    }
}

} // namespace ctp
