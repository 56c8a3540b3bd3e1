#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/measure.hpp"
#include "ctp/path.hpp"

namespace ctp {

// Naive enumeration refuses to walk more than this many paths.
inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

/// Discrete space-time geometry. Sites 0..S-1 with hard walls, slices
/// 0..T. The per-step kinetic phase is alpha*(dx)^2; hop_range caps |dx|
/// (nullopt: unrestricted). masks[t], when present, lists the open sites
/// of slice t; a path must sit on an open site at every slice.
struct LatticeConfig {
    int sites = 0;
    int steps = 0;
    double alpha = 0.0;
    std::optional<int> hop_range;
    std::map<int, std::set<int>> masks;

    int effective_hop_range() const { return hop_range ? *hop_range : sites - 1; }

    void validate() const
    {
        if (sites < 2)
            throw DomainError("lattice: sites must be >= 2");
        if (steps < 1)
            throw DomainError("lattice: steps must be >= 1");
        if (!std::isfinite(alpha))
            throw DomainError("lattice: alpha must be finite");
        if (hop_range && (*hop_range < 1 || *hop_range > sites - 1))
            throw DomainError("lattice: hop_range must lie in [1, sites-1]");
        for (const auto& [t, open] : masks) {
            if (t < 0 || t > steps)
                throw DomainError("lattice: mask slice outside [0, steps]");
            if (open.empty())
                throw DomainError("lattice: mask with empty open set");
            for (int x : open)
                if (x < 0 || x >= sites)
                    throw DomainError("lattice: mask site outside the lattice");
        }
    }

    bool site_open(int t, int x) const
    {
        auto it = masks.find(t);
        return it == masks.end() || it->second.count(x) > 0;
    }

    bool hop_allowed(int from, int to) const
    {
        return std::abs(to - from) <= effective_hop_range();
    }
};

/// One-step amplitude kernel K[x'][x] = exp(i*alpha*(x'-x)^2) within hop
/// range, zero outside. Symmetric and translation invariant, so only the
/// band profile is stored.
class PropagatorMatrix {
public:
    explicit PropagatorMatrix(const LatticeConfig& config)
        : sites_(config.sites), hop_(config.effective_hop_range())
    {
        config.validate();
        band_.resize(static_cast<std::size_t>(hop_) + 1);
        for (int d = 0; d <= hop_; ++d)
            band_[static_cast<std::size_t>(d)] =
                std::polar(1.0, config.alpha * static_cast<double>(d) * d);
    }

    int sites() const { return sites_; }

    Complex entry(int to, int from) const
    {
        const int d = std::abs(to - from);
        return d <= hop_ ? band_[static_cast<std::size_t>(d)] : Complex{};
    }

    /// y = K v with a fixed ascending summation order per output site.
    std::vector<Complex> apply(const std::vector<Complex>& v) const
    {
        std::vector<Complex> out(static_cast<std::size_t>(sites_));
        for (int to = 0; to < sites_; ++to) {
            const int lo = std::max(0, to - hop_);
            const int hi = std::min(sites_ - 1, to + hop_);
            Complex acc{};
            for (int from = lo; from <= hi; ++from)
                acc += band_[static_cast<std::size_t>(std::abs(to - from))]
                    * v[static_cast<std::size_t>(from)];
            out[static_cast<std::size_t>(to)] = acc;
        }
        return out;
    }

private:
    int sites_;
    int hop_;
    std::vector<Complex> band_;
};

/// Feynman amplitude of one forward path: exp(i * alpha * sum (dx)^2).
/// The phase is accumulated first so the modulus is exactly one polar call.
inline Complex path_amplitude(const Path& path, const LatticeConfig& config)
{
    config.validate();
    if (path.orientation != Orientation::Forward)
        throw DomainError("path_amplitude: amplitudes are defined on forward paths");
    if (static_cast<int>(path.sites.size()) != config.steps + 1)
        throw DomainError("invalid path: length must be steps+1");
    double action = 0.0;
    for (int t = 0; t <= config.steps; ++t) {
        const int x = path.sites[static_cast<std::size_t>(t)];
        if (x < 0 || x >= config.sites)
            throw DomainError("invalid path: site outside the lattice");
        if (!config.site_open(t, x))
            throw DomainError("invalid path: closed site at slice " + std::to_string(t));
        if (t > 0) {
            const int prev = path.sites[static_cast<std::size_t>(t) - 1];
            if (!config.hop_allowed(prev, x))
                throw DomainError("invalid path: hop exceeds range at slice "
                                  + std::to_string(t));
            const double dx = static_cast<double>(x - prev);
            action += dx * dx;
        }
    }
    return std::polar(1.0, config.alpha * action);
}

/// Exact number of valid source->target paths, saturating just above the
/// enumeration guard.
inline std::uint64_t count_paths(const LatticeConfig& config, int source, int target)
{
    config.validate();
    if (source < 0 || source >= config.sites || target < 0 || target >= config.sites)
        throw DomainError("path count: source/target outside the lattice");
    const std::uint64_t cap = kEnumerationGuard + 1;
    const int hop = config.effective_hop_range();
    std::vector<std::uint64_t> count(static_cast<std::size_t>(config.sites), 0);
    if (config.site_open(0, source))
        count[static_cast<std::size_t>(source)] = 1;
    for (int t = 1; t <= config.steps; ++t) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(config.sites), 0);
        for (int x = 0; x < config.sites; ++x) {
            if (!config.site_open(t, x))
                continue;
            const int lo = std::max(0, x - hop);
            const int hi = std::min(config.sites - 1, x + hop);
            std::uint64_t acc = 0;
            for (int from = lo; from <= hi; ++from) {
                acc += count[static_cast<std::size_t>(from)];
                if (acc > cap)
                    acc = cap;
            }
            next[static_cast<std::size_t>(x)] = acc;
        }
        count.swap(next);
    }
    return count[static_cast<std::size_t>(target)];
}

namespace detail {

// Depth-first walk over all valid paths in lexicographic site order,
// pruned by backward reachability. fn(sites, action_sum) per leaf.
template <class Fn>
void for_each_path(const LatticeConfig& config, int source, int target, Fn&& fn)
{
    config.validate();
    if (source < 0 || source >= config.sites || target < 0 || target >= config.sites)
        throw DomainError("path walk: source/target outside the lattice");
    if (count_paths(config, source, target) > kEnumerationGuard)
        throw CapacityError("path enumeration guard exceeded; use path_sum_fast");
    if (!config.site_open(0, source) || !config.site_open(config.steps, target))
        return;

    const int hop = config.effective_hop_range();
    // reach[t][x]: target reachable from (t, x)
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(config.steps) + 1,
                                         std::vector<char>(static_cast<std::size_t>(config.sites), 0));
    reach[static_cast<std::size_t>(config.steps)][static_cast<std::size_t>(target)] = 1;
    for (int t = config.steps - 1; t >= 0; --t)
        for (int x = 0; x < config.sites; ++x) {
            if (!config.site_open(t, x))
                continue;
            const int lo = std::max(0, x - hop);
            const int hi = std::min(config.sites - 1, x + hop);
            for (int nx = lo; nx <= hi; ++nx)
                if (config.site_open(t + 1, nx)
                    && reach[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(nx)]) {
                    reach[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = 1;
                    break;
                }
        }
    if (!reach[0][static_cast<std::size_t>(source)])
        return;

    std::vector<int> sites(static_cast<std::size_t>(config.steps) + 1);
    sites[0] = source;
    std::vector<double> action(static_cast<std::size_t>(config.steps) + 1, 0.0);

    auto walk = [&](auto&& self, int t) -> void {
        if (t == config.steps) {
            fn(static_cast<const std::vector<int>&>(sites), action[static_cast<std::size_t>(t)]);
            return;
        }
        const int here = sites[static_cast<std::size_t>(t)];
        const int lo = std::max(0, here - hop);
        const int hi = std::min(config.sites - 1, here + hop);
        for (int nx = lo; nx <= hi; ++nx) {
            if (!config.site_open(t + 1, nx)
                || !reach[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(nx)])
                continue;
            sites[static_cast<std::size_t>(t) + 1] = nx;
            const double dx = static_cast<double>(nx - here);
            action[static_cast<std::size_t>(t) + 1] =
                action[static_cast<std::size_t>(t)] + dx * dx;
            self(self, t + 1);
        }
    };
    walk(walk, 0);
}

} // namespace detail

/// Every mask- and hop-respecting forward path from source (slice 0) to
/// target (slice T), in lexicographic order.
inline std::vector<Path> enumerate_paths(const LatticeConfig& config, int source, int target)
{
    std::vector<Path> out;
    detail::for_each_path(config, source, target, [&](const std::vector<int>& sites, double) {
        out.push_back(Path{sites, Orientation::Forward});
    });
    return out;
}

/// Slow evaluator: direct sum of path amplitudes over the enumeration.
inline Complex path_sum_naive(const LatticeConfig& config, int source, int target)
{
    Complex sum{};
    detail::for_each_path(config, source, target,
                          [&](const std::vector<int>&, double action) {
                              sum += std::polar(1.0, config.alpha * action);
                          });
    return sum;
}

/// Masked transfer-matrix propagation of a state vector from slice from_t
/// to slice to_t. Applies (M_{t+1} K) per step; the input state is assumed
/// to respect the mask of slice from_t already.
inline std::vector<Complex> propagate(std::vector<Complex> state, const LatticeConfig& config,
                                      int from_t, int to_t)
{
    config.validate();
    if (static_cast<int>(state.size()) != config.sites)
        throw DomainError("propagate: state size must equal the site count");
    if (from_t < 0 || to_t > config.steps || from_t > to_t)
        throw DomainError("propagate: time slices out of range");
    const PropagatorMatrix kernel(config);
    for (int t = from_t; t < to_t; ++t) {
        state = kernel.apply(state);
        if (auto it = config.masks.find(t + 1); it != config.masks.end())
            for (int x = 0; x < config.sites; ++x)
                if (!it->second.count(x))
                    state[static_cast<std::size_t>(x)] = Complex{};
    }
    return state;
}

/// Full-screen amplitudes at slice T for a delta source at slice 0; entry
/// x equals path_sum_fast(config, source, x).
inline std::vector<Complex> screen_amplitudes(const LatticeConfig& config, int source)
{
    config.validate();
    if (source < 0 || source >= config.sites)
        throw DomainError("screen_amplitudes: source outside the lattice");
    std::vector<Complex> state(static_cast<std::size_t>(config.sites));
    if (config.site_open(0, source))
        state[static_cast<std::size_t>(source)] = Complex{1.0, 0.0};
    return propagate(std::move(state), config, 0, config.steps);
}

/// Fast evaluator: e_target . (prod_t M_t K) . M_0 e_source.
inline Complex path_sum_fast(const LatticeConfig& config, int source, int target)
{
    if (target < 0 || target >= config.sites)
        throw DomainError("path_sum_fast: target outside the lattice");
    return screen_amplitudes(config, source)[static_cast<std::size_t>(target)];
}

/// Measure context over the lattice: Omega+ is the enumerated path set and
/// the amplitude map is the Feynman phase. Guarded by the enumeration cap.
inline MeasureContext lattice_context(const LatticeConfig& config, int source, int target)
{
    std::vector<Path> paths = enumerate_paths(config, source, target);
    std::vector<Complex> amps;
    amps.reserve(paths.size());
    for (const Path& p : paths)
        amps.push_back(path_amplitude(p, config));
    return MeasureContext(config.sites, config.steps, std::move(paths), std::move(amps));
}

} // namespace ctp
