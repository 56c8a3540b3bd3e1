#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/experiment.hpp"
#include "ctp/lattice.hpp"

namespace ctp {

/// One CLI invocation's worth of configuration.
struct RunConfig {
    LatticeConfig lattice;
    int source = 0;
    int barrier_t = 0;
    std::vector<int> slits;
    std::vector<int> measured;
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out; // empty: stdout

    SlitExperiment experiment() const
    {
        SlitExperiment exp;
        exp.config = lattice;
        exp.source = source;
        exp.barrier_t = barrier_t;
        exp.slits = slits;
        exp.measured = measured;
        return exp;
    }

    void validate() const
    {
        experiment().validate();
        if (format != "csv" && format != "json")
            throw DomainError("config: format must be csv or json");
        if (samples && *samples < 1)
            throw DomainError("config: samples must be >= 1");
    }
};

inline std::vector<std::string> preset_names() { return {"exp1", "exp2", "nslit3m1"}; }

/// Version-pinned configurations. exp1 is the symmetric two-slit setup
/// with no which-path measurement; exp2 measures slit 2; nslit3m1 is the
/// three-slit setup with slit 1 measured. Geometry chosen so exp1 shows
/// deep interference minima on the screen.
inline RunConfig preset_config(const std::string& name)
{
    RunConfig cfg;
    cfg.lattice.sites = 64;
    cfg.lattice.steps = 8;
    cfg.lattice.alpha = 0.5;
    cfg.lattice.hop_range = std::nullopt;
    cfg.source = 32;
    cfg.barrier_t = 4;
    cfg.seed = 1;
    if (name == "exp1") {
        cfg.slits = {28, 36};
    } else if (name == "exp2") {
        cfg.slits = {28, 36};
        cfg.measured = {2};
    } else if (name == "nslit3m1") {
        cfg.slits = {26, 32, 38};
        cfg.measured = {1};
    } else {
        throw DomainError("unknown preset: " + name);
    }
    return cfg;
}

} // namespace ctp
