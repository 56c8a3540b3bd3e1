#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <vector>

#include "ctp/common.hpp"

namespace ctp {

enum class Orientation { Forward, Backward };

/// One leg of a trajectory pair: a site index per step of its own
/// traversal. A forward leg runs slice 0 -> T, so sites[t] is the site at
/// slice t. A backward leg runs slice T -> 0, so sites[i] is the site at
/// slice T-i. reversed() flips both the index order and the orientation.
struct Path {
    std::vector<int> sites;
    Orientation orientation = Orientation::Forward;

    int step_count() const { return static_cast<int>(sites.size()) - 1; }

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path&, const Path&) = default;
};

inline Path reversed(const Path& p)
{
    Path out;
    out.sites.assign(p.sites.rbegin(), p.sites.rend());
    out.orientation = p.orientation == Orientation::Forward ? Orientation::Backward
                                                            : Orientation::Forward;
    return out;
}

/// Site of a backward-oriented leg at a given time slice.
inline int site_at_slice(const Path& p, int t)
{
    if (p.orientation == Orientation::Forward)
        return p.sites[static_cast<std::size_t>(t)];
    return p.sites[p.sites.size() - 1 - static_cast<std::size_t>(t)];
}

/// Elementary event of the theory: a forward leg and a backward leg over
/// the same number of time steps.
struct TrajectoryPair {
    Path plus;  // forward
    Path minus; // backward

    friend bool operator==(const TrajectoryPair&, const TrajectoryPair&) = default;
    friend auto operator<=>(const TrajectoryPair&, const TrajectoryPair&) = default;
};

inline TrajectoryPair make_pair_checked(Path plus, Path minus)
{
    if (plus.orientation != Orientation::Forward)
        throw DomainError("trajectory pair: plus leg must be forward-oriented");
    if (minus.orientation != Orientation::Backward)
        throw DomainError("trajectory pair: minus leg must be backward-oriented");
    if (plus.sites.size() != minus.sites.size())
        throw DomainError("trajectory pair: legs must span the same number of steps");
    return TrajectoryPair{std::move(plus), std::move(minus)};
}

/// Adjoint pair: swap the legs and reverse each one.
inline TrajectoryPair adjoint(const TrajectoryPair& pair)
{
    return TrajectoryPair{reversed(pair.minus), reversed(pair.plus)};
}

} // namespace ctp
