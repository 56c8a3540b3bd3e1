#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/event.hpp"
#include "ctp/lattice.hpp"

namespace ctp {

/// n-slit experiment: a point source at slice 0, a barrier slice whose
/// open sites are the slits, and the screen at the final slice. `measured`
/// lists the slits (1-based) carrying a which-path detector.
struct SlitExperiment {
    LatticeConfig config; // base geometry; must not mask the barrier slice itself
    int source = 0;
    int barrier_t = 0;
    std::vector<int> slits;
    std::vector<int> measured;

    int slit_count() const { return static_cast<int>(slits.size()); }

    bool is_measured(int k) const
    {
        return std::find(measured.begin(), measured.end(), k) != measured.end();
    }

    void validate() const
    {
        config.validate();
        if (source < 0 || source >= config.sites)
            throw DomainError("experiment: source outside the lattice");
        if (barrier_t < 1 || barrier_t > config.steps - 1)
            throw DomainError("experiment: barrier slice must be interior");
        if (config.masks.count(barrier_t))
            throw DomainError("experiment: base config already masks the barrier slice");
        if (slits.empty())
            throw DomainError("experiment: need at least one slit");
        std::set<int> seen;
        for (int s : slits) {
            if (s < 0 || s >= config.sites)
                throw DomainError("experiment: slit outside the lattice");
            if (!seen.insert(s).second)
                throw DomainError("experiment: duplicate slit");
        }
        for (int k : measured)
            if (k < 1 || k > slit_count())
                throw DomainError("experiment: measured index outside 1..n");
        std::set<int> m(measured.begin(), measured.end());
        if (m.size() != measured.size())
            throw DomainError("experiment: duplicate measured index");
    }

    /// Geometry with the barrier mask applied: all slits open, or just
    /// slit `only_slit` (1-based).
    LatticeConfig masked_config(std::optional<int> only_slit = std::nullopt) const
    {
        LatticeConfig out = config;
        if (only_slit) {
            if (*only_slit < 1 || *only_slit > slit_count())
                throw DomainError("experiment: slit index outside 1..n");
            out.masks[barrier_t] = {slits[static_cast<std::size_t>(*only_slit - 1)]};
        } else {
            out.masks[barrier_t] = std::set<int>(slits.begin(), slits.end());
        }
        return out;
    }
};

/// Per-screen-site C-probabilities with the direct/interference split.
/// total[x] is stored as the single complex sum direct[x] + interference[x],
/// so the bookkeeping identity holds bit-for-bit.
struct ScreenPattern {
    int sites = 0;
    std::vector<int> slits;
    std::vector<int> measured;
    std::vector<Complex> total;
    std::vector<double> direct;
    std::vector<Complex> interference;
    std::vector<std::vector<Complex>> slit_amps; // [k][x] for slit k+1

    double max_total() const
    {
        double m = 0.0;
        for (const Complex& t : total)
            m = std::max(m, std::abs(t.real()));
        return m;
    }
};

/// State of the slit-k component at slice t: masked delta source
/// propagated under the single-slit geometry. Shared by the screen
/// amplitudes and the wave-function construction so the two agree exactly.
inline std::vector<Complex> component_state(const SlitExperiment& exp, int k, int t)
{
    const LatticeConfig cfg = exp.masked_config(k);
    std::vector<Complex> state(static_cast<std::size_t>(cfg.sites));
    if (cfg.site_open(0, exp.source))
        state[static_cast<std::size_t>(exp.source)] = Complex{1.0, 0.0};
    return propagate(std::move(state), cfg, 0, t);
}

/// Screen vectors phi_k, one per slit (fast evaluator).
inline std::vector<std::vector<Complex>> slit_amplitude_vectors(const SlitExperiment& exp)
{
    exp.validate();
    std::vector<std::vector<Complex>> amps;
    amps.reserve(static_cast<std::size_t>(exp.slit_count()));
    for (int k = 1; k <= exp.slit_count(); ++k)
        amps.push_back(component_state(exp, k, exp.config.steps));
    return amps;
}

/// (phi_1 .. phi_n) at one screen site.
inline std::vector<Complex> slit_amplitudes(const SlitExperiment& exp, int x)
{
    if (x < 0 || x >= exp.config.sites)
        throw DomainError("slit_amplitudes: screen site outside the lattice");
    auto vectors = slit_amplitude_vectors(exp);
    std::vector<Complex> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors)
        out.push_back(v[static_cast<std::size_t>(x)]);
    return out;
}

/// Same amplitudes through the naive enumeration (cross-evaluator oracle).
inline std::vector<Complex> slit_amplitudes_naive(const SlitExperiment& exp, int x)
{
    exp.validate();
    if (x < 0 || x >= exp.config.sites)
        throw DomainError("slit_amplitudes_naive: screen site outside the lattice");
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(exp.slit_count()));
    for (int k = 1; k <= exp.slit_count(); ++k)
        out.push_back(path_sum_naive(exp.masked_config(k), exp.source, x));
    return out;
}

/// Observed pattern: Phi(E(x)) = sum_k |phi_k|^2 over all slits plus
/// sum_{k != l, both unmeasured} phi_k conj(phi_l).
inline ScreenPattern pattern(const SlitExperiment& exp)
{
    exp.validate();
    const int n = exp.slit_count();
    const int sites = exp.config.sites;

    ScreenPattern out;
    out.sites = sites;
    out.slits = exp.slits;
    out.measured = exp.measured;
    std::sort(out.measured.begin(), out.measured.end());
    out.slit_amps = slit_amplitude_vectors(exp);
    out.total.resize(static_cast<std::size_t>(sites));
    out.direct.resize(static_cast<std::size_t>(sites));
    out.interference.resize(static_cast<std::size_t>(sites));

    for (int x = 0; x < sites; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        double direct = 0.0;
        for (int k = 0; k < n; ++k)
            direct += std::norm(out.slit_amps[static_cast<std::size_t>(k)][xi]);
        Complex interference{};
        for (int k = 1; k <= n; ++k) {
            if (exp.is_measured(k))
                continue;
            for (int l = k + 1; l <= n; ++l) {
                if (exp.is_measured(l))
                    continue;
                const Complex z = out.slit_amps[static_cast<std::size_t>(k - 1)][xi]
                    * std::conj(out.slit_amps[static_cast<std::size_t>(l - 1)][xi]);
                interference += z + std::conj(z); // imaginary parts cancel exactly
            }
        }
        out.direct[xi] = direct;
        out.interference[xi] = interference;
        out.total[xi] = Complex{direct, 0.0} + interference;
    }
    return out;
}

/// Which-slit event class: the forward leg passes slit k, the backward
/// leg slit l (1-based).
struct EventClass {
    int k = 0;
    int l = 0;

    friend bool operator==(const EventClass&, const EventClass&) = default;
};

/// Phi(E_kl) = phi_k * conj(phi_l) for every class allowed by the measured
/// set: all diagonals, plus every ordered unmeasured pair. Diagonals come
/// first in slit order, then off-diagonal pairs (k,l), (l,k) for k < l.
inline std::vector<std::pair<EventClass, Complex>>
event_decomposition(const SlitExperiment& exp, int x)
{
    exp.validate();
    if (x < 0 || x >= exp.config.sites)
        throw DomainError("event_decomposition: screen site outside the lattice");
    const auto amps = slit_amplitudes(exp, x);
    const int n = exp.slit_count();

    std::vector<std::pair<EventClass, Complex>> out;
    for (int k = 1; k <= n; ++k)
        out.emplace_back(EventClass{k, k},
                         amps[static_cast<std::size_t>(k - 1)]
                             * std::conj(amps[static_cast<std::size_t>(k - 1)]));
    for (int k = 1; k <= n; ++k) {
        if (exp.is_measured(k))
            continue;
        for (int l = k + 1; l <= n; ++l) {
            if (exp.is_measured(l))
                continue;
            const Complex z = amps[static_cast<std::size_t>(k - 1)]
                * std::conj(amps[static_cast<std::size_t>(l - 1)]);
            out.emplace_back(EventClass{k, l}, z);
            out.emplace_back(EventClass{l, k}, std::conj(z));
        }
    }
    return out;
}

/// Screen sites where the observed total nearly vanishes while some
/// diagonal subevent does not: witnesses of null events with non-null
/// subevents. Thresholds are relative to the pattern maximum.
inline std::vector<int> find_null_events(const SlitExperiment& exp, double rel_tol = 1e-3)
{
    exp.validate();
    if (!exp.measured.empty())
        throw DomainError("find_null_events: requires an unmeasured experiment");
    const ScreenPattern pat = pattern(exp);
    const double scale = pat.max_total();
    std::vector<int> out;
    for (int x = 0; x < pat.sites; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        if (std::abs(pat.total[xi].real()) > rel_tol * scale)
            continue;
        bool live_subevent = false;
        for (const auto& amp : pat.slit_amps)
            if (std::norm(amp[xi]) >= rel_tol * scale) {
                live_subevent = true;
                break;
            }
        if (live_subevent)
            out.push_back(x);
    }
    return out;
}

/// Additive baseline: every slit treated as measured, so the pattern is
/// the plain sum of one-slit intensities.
inline ScreenPattern classical_baseline(const SlitExperiment& exp)
{
    SlitExperiment all = exp;
    all.measured.resize(static_cast<std::size_t>(exp.slit_count()));
    for (int k = 1; k <= exp.slit_count(); ++k)
        all.measured[static_cast<std::size_t>(k - 1)] = k;
    return pattern(all);
}

/// Symbolic event E_kl at screen site x: both legs from the source to x,
/// the forward leg through slit k and the backward leg through slit l.
inline Event slit_class_event(const SlitExperiment& exp, int x, int k, int l)
{
    exp.validate();
    if (k < 1 || k > exp.slit_count() || l < 1 || l > exp.slit_count())
        throw DomainError("slit_class_event: slit index outside 1..n");
    SymbolicEvent c;
    c.confirm = {SpaceTimePoint{0, exp.source}, SpaceTimePoint{exp.config.steps, x}};
    c.plus_through = {SpaceTimePoint{exp.barrier_t, exp.slits[static_cast<std::size_t>(k - 1)]}};
    c.minus_through = {SpaceTimePoint{exp.barrier_t, exp.slits[static_cast<std::size_t>(l - 1)]}};
    return Event::symbolic(std::move(c));
}

} // namespace ctp
