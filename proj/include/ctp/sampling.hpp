#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/density.hpp"
#include "ctp/experiment.hpp"

namespace ctp {

/// Screen distribution after Z-normalization: probs sum to 1, every entry
/// nonnegative, z holds the normalization constant.
struct NormalizedDistribution {
    std::vector<int> bins;
    std::vector<double> probs;
    double z = 0.0;
};

/// Normalize raw screen totals. Negative entries within a relative
/// tolerance of the maximum are numerical noise from the interference
/// cancellation and are clamped to zero before dividing.
inline NormalizedDistribution normalize_totals(const std::vector<double>& totals)
{
    if (totals.empty())
        throw DomainError("normalize: no screen bins");
    double scale = 0.0;
    for (double t : totals)
        scale = std::max(scale, std::abs(t));
    const double floor = -1e-10 * std::max(1.0, scale);
    NormalizedDistribution out;
    out.bins.resize(totals.size());
    out.probs.resize(totals.size());
    double z = 0.0;
    for (std::size_t i = 0; i < totals.size(); ++i) {
        out.bins[i] = static_cast<int>(i);
        if (totals[i] < floor)
            throw InvariantError("normalize: screen total is negative beyond tolerance");
        const double clamped = totals[i] < 0.0 ? 0.0 : totals[i];
        out.probs[i] = clamped;
        z += clamped;
    }
    if (!(z > 0.0))
        throw DegenerateError("normalize: normalization constant Z is not positive");
    out.z = z;
    for (double& p : out.probs)
        p /= z;
    return out;
}

inline NormalizedDistribution normalize(const ScreenPattern& pat)
{
    const double scale = std::max(1.0, pat.max_total());
    std::vector<double> totals(pat.total.size());
    for (std::size_t i = 0; i < pat.total.size(); ++i) {
        if (std::abs(pat.total[i].imag()) > 1e-10 * scale)
            throw InvariantError("normalize: pattern total has a non-real entry");
        totals[i] = pat.total[i].real();
    }
    return normalize_totals(totals);
}

/// Empirical frequencies of N seeded draws against the distribution they
/// were drawn from. Identical (distribution, n, seed) give identical
/// reports, byte for byte.
struct FrequencyReport {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::vector<int> bins;
    std::vector<std::uint64_t> counts;
    std::vector<double> probs;
    std::vector<double> p;          // counts / n
    std::vector<double> deviations; // |p - probs|
    std::vector<double> bounds;     // 4 sqrt(probs (1-probs) / n)
    bool pass = false;

    double mean_squared_deviation() const
    {
        double acc = 0.0;
        for (double d : deviations)
            acc += d * d;
        return acc / static_cast<double>(deviations.size());
    }
};

struct LlnCheck {
    std::vector<char> bin_pass;
    bool all_pass = false;
    bool null_events_ok = false; // bins with prob 0 stayed at count 0
};

/// Per-bin law-of-large-numbers check at the 4-sigma binomial bound.
inline LlnCheck lln_check(const FrequencyReport& report, const NormalizedDistribution& dist)
{
    if (report.probs.size() != dist.probs.size())
        throw DomainError("lln_check: report does not match the distribution");
    LlnCheck out;
    out.bin_pass.resize(report.probs.size());
    out.all_pass = true;
    out.null_events_ok = true;
    for (std::size_t i = 0; i < report.probs.size(); ++i) {
        const bool ok = report.deviations[i] <= report.bounds[i];
        out.bin_pass[i] = ok ? 1 : 0;
        out.all_pass = out.all_pass && ok;
        if (dist.probs[i] == 0.0 && report.counts[i] != 0)
            out.null_events_ok = false;
    }
    out.all_pass = out.all_pass && out.null_events_ok;
    return out;
}

/// N independent inverse-CDF draws on a seeded mt19937_64. Zero-probability
/// bins are excluded from the CDF support, so they can never be drawn.
inline FrequencyReport sample(const NormalizedDistribution& dist, std::uint64_t n,
                              std::uint64_t seed)
{
    if (n < 1)
        throw DomainError("sample: need at least one draw");
    const std::size_t nbins = dist.probs.size();
    if (nbins == 0)
        throw DomainError("sample: empty distribution");

    std::vector<std::size_t> support;
    std::vector<double> cdf;
    double acc = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
        if (dist.probs[i] > 0.0) {
            acc += dist.probs[i];
            support.push_back(i);
            cdf.push_back(acc);
        }
    }
    if (support.empty())
        throw DegenerateError("sample: distribution has no support");
    cdf.back() = 1.0; // absorb the last-ulp rounding of the partial sums

    FrequencyReport report;
    report.n = n;
    report.seed = seed;
    report.bins = dist.bins;
    report.probs = dist.probs;
    report.counts.assign(nbins, 0);

    std::mt19937_64 rng(seed);
    for (std::uint64_t draw = 0; draw < n; ++draw) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t pick = support[static_cast<std::size_t>(it - cdf.begin())];
        ++report.counts[pick];
    }

    report.p.resize(nbins);
    report.deviations.resize(nbins);
    report.bounds.resize(nbins);
    for (std::size_t i = 0; i < nbins; ++i) {
        report.p[i] = static_cast<double>(report.counts[i]) / static_cast<double>(n);
        report.deviations[i] = std::abs(report.p[i] - report.probs[i]);
        report.bounds[i] =
            4.0 * std::sqrt(report.probs[i] * (1.0 - report.probs[i]) / static_cast<double>(n));
    }
    report.pass = lln_check(report, dist).all_pass;
    return report;
}

/// Born-rule check: the normalized pattern route and the density-diagonal
/// route must agree before sampling, and the sampled frequencies must sit
/// inside the LLN bounds.
struct BornReport {
    double route_residual = 0.0;
    bool routes_agree = false;
    FrequencyReport frequency;
    bool pass = false;
};

inline BornReport born_check(const SlitExperiment& exp, std::uint64_t n, std::uint64_t seed)
{
    exp.validate();
    const NormalizedDistribution via_pattern = normalize(pattern(exp));

    const auto components = slit_wavefunctions(exp, exp.config.steps);
    const DensityMatrix rho = assemble_density(components, exp);
    const NormalizedDistribution via_density = normalize_totals(diagonal_pattern(rho));

    BornReport out;
    for (std::size_t i = 0; i < via_pattern.probs.size(); ++i)
        out.route_residual =
            std::max(out.route_residual, std::abs(via_pattern.probs[i] - via_density.probs[i]));
    out.routes_agree = out.route_residual <= 1e-10;
    out.frequency = sample(via_pattern, n, seed);
    out.pass = out.routes_agree && out.frequency.pass;
    return out;
}

} // namespace ctp
