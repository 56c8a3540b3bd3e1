// ctp: command-line front end for the complex-probability engine.
//
// Exit codes: 0 success, 2 invalid configuration, 3 capacity guard hit,
// 4 internal invariant violation.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctp/ctp.hpp"

namespace {

struct CliOptions {
    std::string config_file;
    std::string preset;
    std::optional<int> sites, steps, hop_range, source, barrier_t;
    std::optional<double> alpha;
    std::vector<int> slits, measured;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format, out;
    std::string evaluator = "fast";
};

ctp::RunConfig resolve_config(const CliOptions& opt)
{
    ctp::RunConfig cfg;
    if (!opt.config_file.empty()) {
        std::ifstream in(opt.config_file);
        if (!in)
            throw ctp::DomainError("cannot open config file: " + opt.config_file);
        cfg = ctp::load_run_config(in);
    } else {
        cfg = ctp::preset_config(opt.preset.empty() ? "exp1" : opt.preset);
    }
    if (opt.sites)
        cfg.lattice.sites = *opt.sites;
    if (opt.steps)
        cfg.lattice.steps = *opt.steps;
    if (opt.alpha)
        cfg.lattice.alpha = *opt.alpha;
    if (opt.hop_range)
        cfg.lattice.hop_range = *opt.hop_range;
    if (opt.source)
        cfg.source = *opt.source;
    if (opt.barrier_t)
        cfg.barrier_t = *opt.barrier_t;
    if (!opt.slits.empty())
        cfg.slits = opt.slits;
    if (!opt.measured.empty())
        cfg.measured = opt.measured;
    if (opt.samples)
        cfg.samples = *opt.samples;
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.format)
        cfg.format = *opt.format;
    if (opt.out)
        cfg.out = *opt.out;
    cfg.validate();
    return cfg;
}

void add_config_flags(CLI::App* cmd, CliOptions& opt)
{
    cmd->add_option("--config", opt.config_file, "JSON configuration file");
    cmd->add_option("--preset", opt.preset, "preset name: exp1, exp2, nslit3m1");
    cmd->add_option("--sites", opt.sites, "lattice sites S");
    cmd->add_option("--steps", opt.steps, "time steps T");
    cmd->add_option("--alpha", opt.alpha, "kinetic phase coefficient");
    cmd->add_option("--hop-range", opt.hop_range, "max |dx| per step (omit: unrestricted)");
    cmd->add_option("--source", opt.source, "source site at slice 0");
    cmd->add_option("--barrier-t", opt.barrier_t, "barrier time slice");
    cmd->add_option("--slits", opt.slits, "slit sites a,b,...")->delimiter(',');
    cmd->add_option("--measured", opt.measured, "measured slit indices i,j (1-based)")
        ->delimiter(',');
    cmd->add_option("--seed", opt.seed, "sampling seed");
    cmd->add_option("--format", opt.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opt.out, "output path (omit: stdout)");
}

void write_text(const std::string& path, const std::string& body)
{
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ctp::DomainError("cannot open output path: " + path);
    out << body;
}

std::string sidecar_path(const std::string& out, const std::string& suffix)
{
    return out.empty() ? out : out + suffix;
}

int run_command(const CliOptions& opt)
{
    const ctp::RunConfig cfg = resolve_config(opt);
    const ctp::SlitExperiment exp = cfg.experiment();

    const ctp::ScreenPattern pat = ctp::pattern(exp);
    const ctp::ScreenPattern classical = ctp::classical_baseline(exp);

    if (opt.evaluator == "naive") {
        // Cross-validate the fast evaluator against direct enumeration.
        // Trips the capacity guard when the lattice is too large to walk.
        double worst = 0.0;
        for (int x = 0; x < exp.config.sites; ++x) {
            const auto slow = ctp::slit_amplitudes_naive(exp, x);
            for (int k = 0; k < exp.slit_count(); ++k) {
                const auto xi = static_cast<std::size_t>(x);
                const auto ki = static_cast<std::size_t>(k);
                worst = std::max(worst, std::abs(slow[ki] - pat.slit_amps[ki][xi]));
            }
        }
        const double tol = 1e-10 * std::max(1.0, std::sqrt(pat.max_total()));
        if (worst > tol)
            throw ctp::InvariantError("evaluator equivalence violated: residual "
                                      + ctp::format17(worst));
        std::cerr << "evaluators agree, max residual " << ctp::format17(worst) << "\n";
    }

    std::optional<ctp::FrequencyReport> freq;
    if (cfg.samples)
        freq = ctp::sample(ctp::normalize(pat), *cfg.samples, cfg.seed);

    if (cfg.format == "json") {
        nlohmann::json j;
        j["pattern"] = ctp::pattern_json(pat, classical);
        if (freq)
            j["frequency_report"] = ctp::report_json(*freq);
        write_text(cfg.out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        ctp::write_pattern_csv(csv, pat, classical);
        write_text(cfg.out, csv.str());
        if (freq) {
            const std::string body = ctp::report_json(*freq).dump(2) + "\n";
            write_text(sidecar_path(cfg.out, ".report.json"), body);
        }
    }
    return 0;
}

int density_command(const CliOptions& opt, std::optional<int> slice)
{
    const ctp::RunConfig cfg = resolve_config(opt);
    const ctp::SlitExperiment exp = cfg.experiment();
    const int t = slice.value_or(exp.config.steps);

    const auto components = ctp::slit_wavefunctions(exp, t);
    const ctp::DensityMatrix rho = ctp::assemble_density(components, exp);
    const ctp::DensityReport report = ctp::density_report(rho);

    if (cfg.format == "json") {
        write_text(cfg.out, ctp::density_json(rho, report).dump(2) + "\n");
    } else {
        std::ostringstream csv;
        ctp::write_density_csv(csv, rho);
        write_text(cfg.out, csv.str());
        // keep the csv clean; the invariant report goes to the diagnostic stream
        std::cerr << ctp::density_json(ctp::DensityMatrix{{}, rho.time, rho.rank_bound}, report)
                         .at("report")
                         .dump(2)
                  << "\n";
    }
    return 0;
}

int verify_axioms_command(std::size_t omega_size, int sites, int path_steps, int trials,
                          std::uint64_t seed, const std::string& out)
{
    const ctp::MeasureContext ctx = ctp::random_context(sites, path_steps, omega_size, seed);
    const ctp::AxiomReport report = ctp::verify_axioms(ctx, trials, seed);
    std::cout << report.summary();
    if (!out.empty())
        write_text(out, ctp::axiom_report_json(report).dump(2) + "\n");
    return report.pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"complex-probability engine: slit experiments, density matrices, "
                 "axiom runs"};
    app.require_subcommand(1);

    CliOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "compute a slit-experiment pattern");
    add_config_flags(run, run_opt);
    run->add_option("--samples", run_opt.samples, "draw N samples and report frequencies");
    run->add_option("--evaluator", run_opt.evaluator, "fast | naive (cross-check)")
        ->check(CLI::IsMember({"fast", "naive"}));

    CliOptions density_opt;
    std::optional<int> density_slice;
    CLI::App* density = app.add_subcommand("density", "emit the density matrix at a slice");
    add_config_flags(density, density_opt);
    density->add_option("--t", density_slice, "time slice (default: the screen)");

    std::size_t omega_size = 200;
    int va_sites = 8;
    int va_steps = 3;
    int va_trials = 1000;
    std::uint64_t va_seed = 1;
    std::string va_out;
    CLI::App* verify = app.add_subcommand("verify-axioms", "randomized axiom suite");
    verify->add_option("--omega-size", omega_size, "|Omega+| of the synthetic space");
    verify->add_option("--sites", va_sites, "synthetic lattice sites");
    verify->add_option("--path-steps", va_steps, "synthetic path steps");
    verify->add_option("--trials", va_trials, "random events per run");
    verify->add_option("--seed", va_seed, "generator seed");
    verify->add_option("--out", va_out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed())
            return run_command(run_opt);
        if (density->parsed())
            return density_command(density_opt, density_slice);
        return verify_axioms_command(omega_size, va_sites, va_steps, va_trials, va_seed,
                                     va_out);
    } catch (const ctp::CapacityError& e) {
        std::cerr << "capacity guard: " << e.what() << "\n"
                  << "hint: use the fast evaluator or a smaller lattice\n";
        return 3;
    } catch (const ctp::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const ctp::Error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
