#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/event.hpp"
#include "ctp/path.hpp"

namespace ctp {

// Expansion guard: largest |Omega| = |Omega+|^2 we will materialize or scan.
inline constexpr std::uint64_t kOmegaPairGuard = 1'000'000;

/// Finite sample space and complex measure. Holds the forward path set
/// Omega+ (sorted lexicographically, unique) and one amplitude per path.
/// The full space is Omega = Omega+ x reversed(Omega+); the pair (i, j)
/// carries the C-probability amplitude(i) * conj(amplitude(j)).
///
/// Immutable after construction; concurrent reads are safe.
class MeasureContext {
public:
    using PairIndex = std::pair<std::uint32_t, std::uint32_t>;

    MeasureContext(int sites, int steps, std::vector<Path> forward_paths,
                   std::vector<Complex> amplitudes)
        : sites_(sites), steps_(steps)
    {
        if (sites_ < 1)
            throw DomainError("measure context: sites must be >= 1");
        if (steps_ < 0)
            throw DomainError("measure context: steps must be >= 0");
        if (forward_paths.size() != amplitudes.size())
            throw DomainError("measure context: one amplitude per path required");

        std::vector<std::size_t> order(forward_paths.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return forward_paths[a] < forward_paths[b];
        });

        paths_.reserve(order.size());
        amps_.reserve(order.size());
        for (std::size_t idx : order) {
            Path& p = forward_paths[idx];
            if (p.orientation != Orientation::Forward)
                throw DomainError("measure context: omega+ paths must be forward");
            if (static_cast<int>(p.sites.size()) != steps_ + 1)
                throw DomainError("measure context: path length must equal steps+1");
            for (int x : p.sites)
                if (x < 0 || x >= sites_)
                    throw DomainError("measure context: path site outside the lattice");
            if (!paths_.empty() && paths_.back() == p)
                throw DomainError("measure context: duplicate forward path");
            if (!std::isfinite(amplitudes[idx].real()) || !std::isfinite(amplitudes[idx].imag()))
                throw DomainError("measure context: amplitude must be finite");
            paths_.push_back(std::move(p));
            amps_.push_back(amplitudes[idx]);
        }
    }

    int sites() const { return sites_; }
    int steps() const { return steps_; }
    std::size_t path_count() const { return paths_.size(); }
    std::uint64_t pair_count() const
    {
        return static_cast<std::uint64_t>(paths_.size()) * paths_.size();
    }

    const Path& forward_path(std::size_t i) const { return paths_[i]; }
    Complex amplitude(std::size_t i) const { return amps_[i]; }

    Complex amplitude_sum() const
    {
        Complex s{};
        for (const Complex& a : amps_)
            s += a;
        return s;
    }

    /// Same space with amplitudes rescaled so the forward sum is exactly 1
    /// and hence Phi(Omega) = 1.
    MeasureContext normalized() const
    {
        const Complex z = amplitude_sum();
        if (std::abs(z) < 1e-300)
            throw DegenerateError("measure context: forward amplitude sum is zero");
        MeasureContext out = *this;
        for (Complex& a : out.amps_)
            a /= z;
        return out;
    }

    std::optional<std::size_t> index_of(const std::vector<int>& sites) const
    {
        Path probe{sites, Orientation::Forward};
        auto it = std::lower_bound(paths_.begin(), paths_.end(), probe);
        if (it == paths_.end() || !(*it == probe))
            return std::nullopt;
        return static_cast<std::size_t>(it - paths_.begin());
    }

    TrajectoryPair pair_at(PairIndex idx) const
    {
        return TrajectoryPair{paths_[idx.first], reversed(paths_[idx.second])};
    }

    /// Index form of an event over this space. Symbolic records are
    /// expanded; explicit pairs must all belong to Omega.
    std::vector<PairIndex> to_indices(const Event& event) const
    {
        if (path_count() == 0)
            throw DomainError("measure: empty omega");
        std::vector<PairIndex> out;
        if (event.is_symbolic()) {
            const SymbolicEvent& c = validated(event.constraints());
            if (pair_count() > kOmegaPairGuard)
                throw CapacityError("symbolic expansion: |omega| exceeds the pair guard");
            const std::uint32_t n = static_cast<std::uint32_t>(path_count());
            std::vector<char> plus_ok(n), minus_ok(n);
            for (std::uint32_t i = 0; i < n; ++i) {
                plus_ok[i] = satisfies_leg(paths_[i], c.confirm, c.exclude, c.plus_through);
                minus_ok[i] = satisfies_leg(paths_[i], c.confirm, c.exclude, c.minus_through);
            }
            for (std::uint32_t i = 0; i < n; ++i) {
                if (!plus_ok[i])
                    continue;
                for (std::uint32_t j = 0; j < n; ++j)
                    if (minus_ok[j])
                        out.emplace_back(i, j);
            }
            return out; // already in canonical (i, j) order
        }
        out.reserve(event.size());
        for (const TrajectoryPair& p : event.pairs()) {
            if (p.plus.orientation != Orientation::Forward
                || p.minus.orientation != Orientation::Backward)
                throw DomainError("measure: pair leg orientations are wrong");
            auto i = index_of(p.plus.sites);
            const Path fwd_view = reversed(p.minus);
            auto j = index_of(fwd_view.sites);
            if (!i || !j)
                throw DomainError("measure: event contains a pair outside omega");
            out.emplace_back(static_cast<std::uint32_t>(*i), static_cast<std::uint32_t>(*j));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Phi over index pairs, summed in the given order.
    Complex measure_indices(std::span<const PairIndex> pairs) const
    {
        Complex sum{};
        for (const PairIndex& ij : pairs)
            sum += amps_[ij.first] * std::conj(amps_[ij.second]);
        return sum;
    }

    /// Phi(Omega) as the literal double sum, without materializing Omega.
    Complex total_measure() const
    {
        if (path_count() == 0)
            throw DomainError("measure: empty omega");
        Complex sum{};
        for (std::size_t i = 0; i < amps_.size(); ++i)
            for (std::size_t j = 0; j < amps_.size(); ++j)
                sum += amps_[i] * std::conj(amps_[j]);
        return sum;
    }

    /// Omega as an explicit event (guarded; intended for small spaces).
    Event whole_space() const
    {
        if (pair_count() > kOmegaPairGuard)
            throw CapacityError("whole_space: |omega| exceeds the pair guard");
        Event::ExplicitSet all;
        all.reserve(pair_count());
        for (const Path& p : paths_)
            for (const Path& q : paths_)
                all.push_back(TrajectoryPair{p, reversed(q)});
        return Event::explicit_set(std::move(all));
    }

private:
    const SymbolicEvent& validated(const SymbolicEvent& c) const
    {
        auto check_points = [&](const std::vector<SpaceTimePoint>& pts) {
            for (const SpaceTimePoint& p : pts)
                if (p.t < 0 || p.t > steps_ || p.x < 0 || p.x >= sites_)
                    throw ConstraintError("symbolic event references a point outside the lattice");
        };
        check_points(c.confirm);
        check_points(c.exclude);
        check_points(c.plus_through);
        check_points(c.minus_through);
        for (const SpaceTimePoint& p : c.confirm)
            for (const SpaceTimePoint& q : c.exclude)
                if (p == q)
                    throw ConstraintError("symbolic event confirms and excludes the same point");
        return c;
    }

    static bool satisfies_leg(const Path& fwd_view,
                              const std::vector<SpaceTimePoint>& confirm,
                              const std::vector<SpaceTimePoint>& exclude,
                              const std::vector<SpaceTimePoint>& through)
    {
        for (const SpaceTimePoint& p : confirm)
            if (fwd_view.sites[static_cast<std::size_t>(p.t)] != p.x)
                return false;
        for (const SpaceTimePoint& p : exclude)
            if (fwd_view.sites[static_cast<std::size_t>(p.t)] == p.x)
                return false;
        for (const SpaceTimePoint& p : through)
            if (fwd_view.sites[static_cast<std::size_t>(p.t)] != p.x)
                return false;
        return true;
    }

    int sites_;
    int steps_;
    std::vector<Path> paths_;
    std::vector<Complex> amps_;
};

/// Expand a symbolic event into its explicit set over the context.
inline Event expand_symbolic(const Event& event, const MeasureContext& ctx)
{
    if (!event.is_symbolic())
        return event;
    auto indices = ctx.to_indices(event);
    Event::ExplicitSet out;
    out.reserve(indices.size());
    for (const auto& ij : indices)
        out.push_back(ctx.pair_at(ij));
    return Event::explicit_set(std::move(out));
}

/// Phi(E): sum of amplitude(plus) * conj(amplitude(forward view of minus))
/// over the event, in canonical order.
inline Complex measure(const Event& event, const MeasureContext& ctx)
{
    auto indices = ctx.to_indices(event);
    return ctx.measure_indices(indices);
}

struct EventClassification {
    bool hermitian = false;
    bool pure = false;
    bool mixed = false;
};

namespace detail {

// Union-find over forward-path indices.
class Blocks {
public:
    explicit Blocks(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a)
    {
        while (parent_[a] != a)
            a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    void merge(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

inline EventClassification classify_indices(std::span<const MeasureContext::PairIndex> pairs,
                                            std::size_t path_count)
{
    EventClassification out;
    std::set<MeasureContext::PairIndex> relation(pairs.begin(), pairs.end());

    out.hermitian = true;
    for (const auto& ij : relation)
        if (!relation.count({ij.second, ij.first})) {
            out.hermitian = false;
            break;
        }

    // E is mixed iff the pair relation is a disjoint union of complete
    // blocks A_k x A_k, i.e. an equivalence relation on its support.
    Blocks blocks(path_count);
    std::set<std::size_t> support;
    for (const auto& ij : relation) {
        blocks.merge(ij.first, ij.second);
        support.insert(ij.first);
        support.insert(ij.second);
    }
    std::vector<std::size_t> block_size(path_count, 0);
    std::set<std::size_t> roots;
    for (std::size_t s : support) {
        std::size_t r = blocks.find(s);
        ++block_size[r];
        roots.insert(r);
    }
    std::uint64_t complete = 0;
    for (std::size_t r : roots)
        complete += static_cast<std::uint64_t>(block_size[r]) * block_size[r];
    out.mixed = complete == relation.size();
    out.pure = out.mixed && roots.size() <= 1;
    return out;
}

} // namespace detail

/// Structural classification of an event, by set comparison after
/// expansion. Pure and mixed events are hermitian by construction; the
/// empty event counts as all three.
inline EventClassification classify(const Event& event, const MeasureContext& ctx)
{
    auto indices = ctx.to_indices(event);
    return detail::classify_indices(indices, ctx.path_count());
}

/// Outcome of a randomized axiom run. Residual fields hold the worst case
/// seen; `pass` applies the documented tolerances.
struct AxiomReport {
    int trials = 0;
    std::uint64_t seed = 0;
    std::size_t omega_plus_size = 0;
    long checks = 0;
    long failures = 0;
    double max_additivity_residual = 0.0;
    double max_conjugation_residual = 0.0;
    double max_factorization_residual = 0.0;
    double max_hermitian_imag = 0.0;
    double max_pure_relative_error = 0.0;
    double min_event_real = 0.0;
    double total_measure_residual = 0.0;
    bool nonreal_witness = false;
    bool classification_ok = true;
    bool pass = false;

    static constexpr double additivity_tol = 1e-10;
    static constexpr double conjugation_tol = 1e-10;
    static constexpr double factorization_tol = 1e-10;
    static constexpr double hermitian_imag_tol = 1e-12;
    static constexpr double pure_relative_tol = 1e-12;
    static constexpr double event_real_floor = -1e-12;
    static constexpr double total_measure_tol = 1e-12;

    std::string summary() const
    {
        std::ostringstream os;
        os << "axiom run: omega+=" << omega_plus_size << " trials=" << trials
           << " seed=" << seed << " checks=" << checks << " failures=" << failures << "\n"
           << "  additivity residual     " << max_additivity_residual << "\n"
           << "  conjugation residual    " << max_conjugation_residual << "\n"
           << "  factorization residual  " << max_factorization_residual << "\n"
           << "  hermitian |Im|          " << max_hermitian_imag << "\n"
           << "  pure relative error     " << max_pure_relative_error << "\n"
           << "  min pure/mixed Re       " << min_event_real << "\n"
           << "  |Phi(Omega) - 1|        " << total_measure_residual << "\n"
           << "  non-real witness        " << (nonreal_witness ? "yes" : "no") << "\n"
           << "  classification          " << (classification_ok ? "ok" : "BROKEN") << "\n"
           << "  verdict                 " << (pass ? "PASS" : "FAIL") << "\n";
        return os.str();
    }
};

/// Randomized verification of (A1)-(A4) consequences over the context.
/// The context is normalized internally so Phi(Omega) = 1 is part of the
/// contract being checked. Failures are reported, never thrown.
inline AxiomReport verify_axioms(const MeasureContext& raw, int trials, std::uint64_t seed)
{
    if (raw.path_count() == 0)
        throw DomainError("verify_axioms: empty omega");
    if (raw.pair_count() > kOmegaPairGuard)
        throw CapacityError("verify_axioms: |omega| exceeds the pair guard");

    const MeasureContext ctx = raw.normalized();
    const std::size_t n = ctx.path_count();

    AxiomReport report;
    report.trials = trials;
    report.seed = seed;
    report.omega_plus_size = n;
    report.total_measure_residual = std::abs(ctx.total_measure() - Complex{1.0, 0.0});
    ++report.checks;

    std::mt19937_64 rng(seed);
    auto rand_index = [&](std::size_t bound) {
        return static_cast<std::uint32_t>(rng() % bound);
    };
    using PairIndex = MeasureContext::PairIndex;

    auto rand_pair_set = [&](std::size_t count) {
        std::set<PairIndex> set;
        while (set.size() < count)
            set.insert({rand_index(n), rand_index(n)});
        return std::vector<PairIndex>(set.begin(), set.end());
    };
    auto rand_path_set = [&](std::size_t count) {
        std::set<std::uint32_t> set;
        while (set.size() < count)
            set.insert(rand_index(n));
        return std::vector<std::uint32_t>(set.begin(), set.end());
    };
    auto square = [&](const std::vector<std::uint32_t>& a) {
        std::vector<PairIndex> out;
        out.reserve(a.size() * a.size());
        for (auto i : a)
            for (auto j : a)
                out.emplace_back(i, j);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto rectangle = [&](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::vector<PairIndex> out;
        out.reserve(a.size() * b.size());
        for (auto i : a)
            for (auto j : b)
                out.emplace_back(i, j);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto forward_sum = [&](const std::vector<std::uint32_t>& a) {
        Complex s{};
        for (auto i : a)
            s += ctx.amplitude(i);
        return s;
    };

    const std::uint64_t max_pairs = std::min<std::uint64_t>(ctx.pair_count(), 64);
    const std::size_t max_paths = std::min<std::size_t>(n, 24);

    for (int trial = 0; trial < trials; ++trial) {
        // A1 sigma-additivity on a disjoint split of a random event.
        auto pairs = rand_pair_set(1 + rng() % max_pairs);
        const Complex whole = ctx.measure_indices(pairs);
        const std::size_t cut = pairs.size() / 2;
        const Complex part1 =
            ctx.measure_indices(std::span(pairs.data(), cut));
        const Complex part2 =
            ctx.measure_indices(std::span(pairs.data() + cut, pairs.size() - cut));
        const double add_res = std::abs(whole - (part1 + part2));
        report.max_additivity_residual = std::max(report.max_additivity_residual, add_res);
        if (add_res > AxiomReport::additivity_tol)
            ++report.failures;
        ++report.checks;

        // A2 conjugation under the adjoint.
        std::vector<PairIndex> adj;
        adj.reserve(pairs.size());
        for (const auto& ij : pairs)
            adj.emplace_back(ij.second, ij.first);
        std::sort(adj.begin(), adj.end());
        const double conj_res = std::abs(ctx.measure_indices(adj) - std::conj(whole));
        report.max_conjugation_residual = std::max(report.max_conjugation_residual, conj_res);
        if (conj_res > AxiomReport::conjugation_tol)
            ++report.failures;
        ++report.checks;

        // A3 factorization on a random rectangle A x B.
        auto a_set = rand_path_set(1 + rng() % max_paths);
        auto b_set = rand_path_set(1 + rng() % max_paths);
        const Complex rect = ctx.measure_indices(rectangle(a_set, b_set));
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        const Complex left = ctx.measure_indices(rectangle(a_set, all));
        const Complex right = ctx.measure_indices(rectangle(all, b_set));
        const double fact_res = std::abs(rect - left * right);
        report.max_factorization_residual = std::max(report.max_factorization_residual, fact_res);
        if (fact_res > AxiomReport::factorization_tol)
            ++report.failures;
        ++report.checks;

        // Pure event A x reversed(A): real, nonnegative, |sum phi|^2.
        auto pure_pairs = square(a_set);
        const Complex pure_val = ctx.measure_indices(pure_pairs);
        const double expected = std::norm(forward_sum(a_set));
        const double pure_err =
            std::abs(pure_val - Complex{expected, 0.0}) / std::max(1.0, expected);
        report.max_pure_relative_error = std::max(report.max_pure_relative_error, pure_err);
        report.min_event_real = std::min(report.min_event_real, pure_val.real());
        auto pure_class = detail::classify_indices(pure_pairs, n);
        if (!pure_class.pure || !pure_class.hermitian || !pure_class.mixed)
            report.classification_ok = false;
        if (pure_err > AxiomReport::pure_relative_tol
            || pure_val.real() < AxiomReport::event_real_floor)
            ++report.failures;
        ++report.checks;

        // Mixed event from two disjoint blocks; hermitian and real.
        std::vector<std::uint32_t> block2;
        for (auto i : b_set)
            if (!std::binary_search(a_set.begin(), a_set.end(), i))
                block2.push_back(i);
        auto mixed_pairs = square(a_set);
        auto more = square(block2);
        mixed_pairs.insert(mixed_pairs.end(), more.begin(), more.end());
        std::sort(mixed_pairs.begin(), mixed_pairs.end());
        const Complex mixed_val = ctx.measure_indices(mixed_pairs);
        report.max_hermitian_imag =
            std::max(report.max_hermitian_imag, std::abs(mixed_val.imag()));
        report.min_event_real = std::min(report.min_event_real, mixed_val.real());
        auto mixed_class = detail::classify_indices(mixed_pairs, n);
        if (!mixed_class.mixed || !mixed_class.hermitian)
            report.classification_ok = false;
        if (!block2.empty() && mixed_class.pure)
            report.classification_ok = false;
        if (std::abs(mixed_val.imag()) > AxiomReport::hermitian_imag_tol
            || mixed_val.real() < AxiomReport::event_real_floor)
            ++report.failures;
        ++report.checks;

        // Track a non-hermitian rectangle with visibly non-real measure.
        if (n >= 2) {
            const std::uint32_t i = rand_index(n);
            std::uint32_t j = rand_index(n);
            if (i != j) {
                PairIndex one{i, j};
                const Complex v = ctx.measure_indices(std::span(&one, 1));
                if (std::abs(v.imag()) > 1e-9)
                    report.nonreal_witness = true;
            }
        }
    }

    if (report.total_measure_residual > AxiomReport::total_measure_tol)
        ++report.failures;

    report.pass = report.failures == 0 && report.classification_ok
        && report.nonreal_witness
        && report.max_additivity_residual <= AxiomReport::additivity_tol
        && report.max_conjugation_residual <= AxiomReport::conjugation_tol
        && report.max_factorization_residual <= AxiomReport::factorization_tol
        && report.max_hermitian_imag <= AxiomReport::hermitian_imag_tol
        && report.max_pure_relative_error <= AxiomReport::pure_relative_tol
        && report.min_event_real >= AxiomReport::event_real_floor
        && report.total_measure_residual <= AxiomReport::total_measure_tol;
    return report;
}

/// Synthetic sample space: `path_count` distinct random walks over a small
/// lattice with unit-modulus random-phase amplitudes. Deterministic in the
/// seed; intended for axiom runs and property tests.
inline MeasureContext random_context(int sites, int steps, std::size_t path_count,
                                     std::uint64_t seed)
{
    if (sites < 2 || steps < 1)
        throw DomainError("random_context: need sites >= 2 and steps >= 1");
    double capacity = 1.0;
    for (int t = 0; t <= steps && capacity < 1e18; ++t)
        capacity *= sites;
    if (static_cast<double>(path_count) > capacity / 2)
        throw DomainError("random_context: too many paths for the lattice size");
    if (path_count * path_count > kOmegaPairGuard)
        throw CapacityError("random_context: |omega| would exceed the pair guard");

    std::mt19937_64 rng(seed);
    std::set<std::vector<int>> seen;
    std::vector<Path> paths;
    std::vector<Complex> amps;
    while (paths.size() < path_count) {
        std::vector<int> sites_seq(static_cast<std::size_t>(steps) + 1);
        for (int& x : sites_seq)
            x = static_cast<int>(rng() % static_cast<std::uint64_t>(sites));
        if (!seen.insert(sites_seq).second)
            continue;
        paths.push_back(Path{std::move(sites_seq), Orientation::Forward});
        const double phase =
            2.0 * 3.14159265358979323846 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        amps.push_back(std::polar(1.0, phase));
    }
    return MeasureContext(sites, steps, std::move(paths), std::move(amps));
}

} // namespace ctp
