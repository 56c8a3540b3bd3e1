#pragma once

#include <algorithm>
#include <compare>
#include <utility>
#include <variant>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/path.hpp"

namespace ctp {

struct SpaceTimePoint {
    int t = 0;
    int x = 0;

    friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
    friend auto operator<=>(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

/// Conjunctive constraint record describing an event without listing its
/// trajectory pairs. `confirm` points must lie on both legs, `exclude`
/// points on neither; the *_through points constrain a single leg (slit
/// selection).
struct SymbolicEvent {
    std::vector<SpaceTimePoint> confirm;
    std::vector<SpaceTimePoint> exclude;
    std::vector<SpaceTimePoint> plus_through;
    std::vector<SpaceTimePoint> minus_through;
};

/// An event: either an explicit finite set of trajectory pairs
/// (canonicalized: sorted, duplicates removed) or a symbolic constraint
/// record to be expanded over a measure context.
class Event {
public:
    using ExplicitSet = std::vector<TrajectoryPair>;

    Event() : repr_(ExplicitSet{}) {}

    static Event explicit_set(ExplicitSet pairs)
    {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        Event e;
        e.repr_ = std::move(pairs);
        return e;
    }

    static Event symbolic(SymbolicEvent constraints)
    {
        Event e;
        e.repr_ = std::move(constraints);
        return e;
    }

    bool is_symbolic() const { return std::holds_alternative<SymbolicEvent>(repr_); }

    const ExplicitSet& pairs() const
    {
        if (is_symbolic())
            throw DomainError("event is symbolic; expand it over a context first");
        return std::get<ExplicitSet>(repr_);
    }

    const SymbolicEvent& constraints() const
    {
        if (!is_symbolic())
            throw DomainError("event is explicit; it has no constraint record");
        return std::get<SymbolicEvent>(repr_);
    }

    std::size_t size() const { return pairs().size(); }
    bool empty() const { return pairs().empty(); }

    bool contains(const TrajectoryPair& p) const
    {
        const auto& set = pairs();
        return std::binary_search(set.begin(), set.end(), p);
    }

    friend bool operator==(const Event& a, const Event& b)
    {
        return a.repr_ == b.repr_;
    }

private:
    std::variant<ExplicitSet, SymbolicEvent> repr_;

    friend bool operator==(const SymbolicEvent&, const SymbolicEvent&);
};

inline bool operator==(const SymbolicEvent& a, const SymbolicEvent& b)
{
    return a.confirm == b.confirm && a.exclude == b.exclude
        && a.plus_through == b.plus_through && a.minus_through == b.minus_through;
}

/// Union of two explicit events.
inline Event unite(const Event& a, const Event& b)
{
    Event::ExplicitSet all = a.pairs();
    const auto& more = b.pairs();
    all.insert(all.end(), more.begin(), more.end());
    return Event::explicit_set(std::move(all));
}

inline bool disjoint(const Event& a, const Event& b)
{
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& p : small.pairs())
        if (large.contains(p))
            return false;
    return true;
}

/// Adjoint event E+. For a symbolic record the two per-leg constraint
/// lists swap; confirm and exclude are leg-symmetric already.
inline Event adjoint(const Event& e)
{
    if (e.is_symbolic()) {
        SymbolicEvent c = e.constraints();
        std::swap(c.plus_through, c.minus_through);
        return Event::symbolic(std::move(c));
    }
    Event::ExplicitSet mapped;
    mapped.reserve(e.size());
    for (const auto& p : e.pairs())
        mapped.push_back(adjoint(p));
    return Event::explicit_set(std::move(mapped));
}

} // namespace ctp
