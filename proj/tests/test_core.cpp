#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ctp/event.hpp"
#include "ctp/lattice.hpp"
#include "ctp/measure.hpp"
#include "ctp/path.hpp"

using namespace ctp;

namespace {

Path fwd(std::vector<int> sites) { return Path{std::move(sites), Orientation::Forward}; }
Path bwd(std::vector<int> sites) { return Path{std::move(sites), Orientation::Backward}; }

// Context with explicitly chosen amplitudes; paths are distinct T=1 walks.
MeasureContext amp_context(const std::vector<Complex>& amps, int sites = 0)
{
    std::vector<Path> paths;
    const int n = static_cast<int>(amps.size());
    const int s = sites > 0 ? sites : n;
    for (int i = 0; i < n; ++i)
        paths.push_back(fwd({i % s, i / s}));
    return MeasureContext(s, 1, std::move(paths), amps);
}

Event pair_event(std::vector<TrajectoryPair> pairs)
{
    return Event::explicit_set(std::move(pairs));
}

// A x reversed(A) over context indices.
Event pure_event(const MeasureContext& ctx, const std::vector<std::size_t>& a)
{
    Event::ExplicitSet set;
    for (std::size_t i : a)
        for (std::size_t j : a)
            set.push_back(TrajectoryPair{ctx.forward_path(i), reversed(ctx.forward_path(j))});
    return Event::explicit_set(std::move(set));
}

Event rect_event(const MeasureContext& ctx, const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b)
{
    Event::ExplicitSet set;
    for (std::size_t i : a)
        for (std::size_t j : b)
            set.push_back(TrajectoryPair{ctx.forward_path(i), reversed(ctx.forward_path(j))});
    return Event::explicit_set(std::move(set));
}

} // namespace

TEST_CASE("adjoint swaps and reverses the legs")
{
    // forced by the definition: plus [0,1], minus [2,1] -> plus [1,2], minus [1,0]
    const TrajectoryPair p{fwd({0, 1}), bwd({2, 1})};
    const TrajectoryPair adj = adjoint(p);
    CHECK(adj.plus == fwd({1, 2}));
    CHECK(adj.minus == bwd({1, 0}));

    SECTION("self-adjoint when minus is the reversed plus")
    {
        const TrajectoryPair sym{fwd({0, 3, 1}), reversed(fwd({0, 3, 1}))};
        CHECK(adjoint(sym) == sym);
    }

    SECTION("involution on random pairs")
    {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> a(5), b(5);
            for (int& x : a)
                x = static_cast<int>(rng() % 7);
            for (int& x : b)
                x = static_cast<int>(rng() % 7);
            const TrajectoryPair pair{fwd(a), bwd(b)};
            CHECK(adjoint(adjoint(pair)) == pair);
        }
    }
}

TEST_CASE("measure on elementary events")
{
    SECTION("unit-modulus amplitude against its own conjugate")
    {
        const Complex a = std::polar(1.0, 3.14159265358979323846 / 3.0);
        auto ctx = amp_context({a, Complex{0.5, 0.25}}, 3);
        const Event e = pure_event(ctx, {0});
        const Complex phi = measure(e, ctx);
        CHECK(phi.real() == Catch::Approx(1.0).margin(1e-15));
        CHECK(phi.imag() == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("pure event with amplitudes 1 and i")
    {
        auto ctx = amp_context({Complex{1, 0}, Complex{0, 1}}, 3);
        const Complex phi = measure(pure_event(ctx, {0, 1}), ctx);
        CHECK(phi.real() == Catch::Approx(2.0).margin(1e-15)); // |1+i|^2
        CHECK(phi.imag() == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("non-hermitian rectangle has non-real measure")
    {
        auto ctx = amp_context({Complex{1, 0}, Complex{0, 1}}, 3);
        const Complex phi = measure(rect_event(ctx, {0}, {1}), ctx);
        CHECK(phi.real() == Catch::Approx(0.0).margin(1e-15));
        CHECK(phi.imag() == Catch::Approx(-1.0).margin(1e-15)); // 1 * conj(i)
        CHECK_FALSE(classify(rect_event(ctx, {0}, {1}), ctx).hermitian);
    }

    SECTION("empty event and empty omega")
    {
        auto ctx = amp_context({Complex{1, 0}}, 2);
        CHECK(measure(Event{}, ctx) == Complex{});
        const auto cls = classify(Event{}, ctx);
        CHECK(cls.hermitian);
        CHECK(cls.pure);
        CHECK(cls.mixed);
        CHECK_THROWS_AS(MeasureContext(2, 1, {}, {}).total_measure(), DomainError);
        CHECK_THROWS_AS(measure(Event{}, MeasureContext(2, 1, {}, {})), DomainError);
    }

    SECTION("pair outside omega is a domain error")
    {
        auto ctx = amp_context({Complex{1, 0}, Complex{0, 1}}, 3);
        const Event e = pair_event({TrajectoryPair{fwd({2, 2}), reversed(fwd({2, 2}))}});
        CHECK_THROWS_AS(measure(e, ctx), DomainError);
    }
}

TEST_CASE("classification by set comparison")
{
    auto ctx = amp_context({Complex{1, 0}, Complex{0, 1}, Complex{0.3, -0.4}, Complex{-1, 0}}, 4);

    SECTION("rectangles A x reversed(A) are pure and hermitian")
    {
        for (const auto& a :
             std::vector<std::vector<std::size_t>>{{0}, {1, 2}, {0, 2, 3}, {0, 1, 2, 3}}) {
            const auto cls = classify(pure_event(ctx, a), ctx);
            CHECK(cls.pure);
            CHECK(cls.mixed);
            CHECK(cls.hermitian);
        }
    }

    SECTION("a single asymmetric pair is not hermitian")
    {
        const auto cls = classify(rect_event(ctx, {0}, {2}), ctx);
        CHECK_FALSE(cls.hermitian);
        CHECK_FALSE(cls.pure);
        CHECK_FALSE(cls.mixed);
    }

    SECTION("disjoint union of two pure blocks is mixed, not pure")
    {
        // brute-force expansion and set comparison is the oracle here
        const Event e = unite(pure_event(ctx, {0, 1}), pure_event(ctx, {2}));
        const auto cls = classify(e, ctx);
        CHECK(cls.mixed);
        CHECK_FALSE(cls.pure);
        CHECK(cls.hermitian);
        CHECK(disjoint(pure_event(ctx, {0, 1}), pure_event(ctx, {2})));
    }

    SECTION("hermitian but not mixed: symmetric off-diagonal pair")
    {
        const Event e = unite(rect_event(ctx, {0}, {1}), rect_event(ctx, {1}, {0}));
        const auto cls = classify(e, ctx);
        CHECK(cls.hermitian);
        CHECK_FALSE(cls.mixed); // blocks are incomplete: no diagonal pairs
        CHECK_FALSE(cls.pure);
    }

    SECTION("hermitian events have real measure")
    {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 200; ++trial) {
            Event::ExplicitSet set;
            for (int k = 0; k < 6; ++k) {
                const auto i = rng() % 4;
                const auto j = rng() % 4;
                set.push_back(TrajectoryPair{ctx.forward_path(i),
                                             reversed(ctx.forward_path(j))});
            }
            Event e = Event::explicit_set(set);
            e = unite(e, adjoint(e)); // symmetric closure is hermitian
            REQUIRE(classify(e, ctx).hermitian);
            CHECK(std::abs(measure(e, ctx).imag()) <= 1e-12);
        }
    }
}

TEST_CASE("A2: adjoint conjugates the measure")
{
    auto ctx = random_context(6, 3, 40, 17);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        Event::ExplicitSet set;
        const int sz = 1 + static_cast<int>(rng() % 24);
        for (int k = 0; k < sz; ++k)
            set.push_back(TrajectoryPair{ctx.forward_path(rng() % 40),
                                         reversed(ctx.forward_path(rng() % 40))});
        const Event e = Event::explicit_set(set);
        const Complex lhs = measure(adjoint(e), ctx);
        const Complex rhs = std::conj(measure(e, ctx));
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("sigma-additivity, exhaustively on a small omega")
{
    // |Omega+| = 3, |Omega| = 9: every 3-coloring of Omega gives a
    // disjoint split E1 / E2 / rest.
    auto ctx = amp_context({std::polar(1.0, 0.3), std::polar(1.0, 1.9), Complex{0.2, -0.7}}, 3);
    std::vector<TrajectoryPair> omega;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            omega.push_back(TrajectoryPair{ctx.forward_path(i), reversed(ctx.forward_path(j))});

    int splits = 0;
    for (int coloring = 0; coloring < 19683; ++coloring) { // 3^9
        Event::ExplicitSet e1, e2;
        int code = coloring;
        for (const auto& pair : omega) {
            const int color = code % 3;
            code /= 3;
            if (color == 1)
                e1.push_back(pair);
            else if (color == 2)
                e2.push_back(pair);
        }
        Event::ExplicitSet both = e1;
        both.insert(both.end(), e2.begin(), e2.end());
        const Complex whole = measure(Event::explicit_set(both), ctx);
        const Complex parts = measure(Event::explicit_set(e1), ctx)
            + measure(Event::explicit_set(e2), ctx);
        REQUIRE(std::abs(whole - parts) <= 1e-12);
        ++splits;
    }
    CHECK(splits == 19683);
}

TEST_CASE("A3: factorization over all rectangles of a small omega")
{
    auto raw = random_context(5, 2, 4, 5);
    auto ctx = raw.normalized();
    for (int mask_a = 0; mask_a < 16; ++mask_a)
        for (int mask_b = 0; mask_b < 16; ++mask_b) {
            std::vector<std::size_t> a, b, all{0, 1, 2, 3};
            for (std::size_t i = 0; i < 4; ++i) {
                if (mask_a & (1 << i))
                    a.push_back(i);
                if (mask_b & (1 << i))
                    b.push_back(i);
            }
            const Complex rect = measure(rect_event(ctx, a, b), ctx);
            const Complex left = measure(rect_event(ctx, a, all), ctx);
            const Complex right = measure(rect_event(ctx, all, b), ctx);
            REQUIRE(std::abs(rect - left * right) <= 1e-12);
        }
}

TEST_CASE("pure events equal the squared forward sum")
{
    auto ctx = random_context(7, 3, 60, 31);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> a;
        for (std::size_t i = 0; i < 60; ++i)
            if (rng() % 3 == 0)
                a.push_back(i);
        Complex fsum{};
        for (std::size_t i : a)
            fsum += ctx.amplitude(i);
        const Complex phi = measure(pure_event(ctx, a), ctx);
        const double expected = std::norm(fsum);
        CHECK(std::abs(phi - Complex{expected, 0.0}) <= 1e-12 * std::max(1.0, expected));
        CHECK(phi.real() >= -1e-12);
    }
}

TEST_CASE("symbolic expansion")
{
    // small two-slit lattice; omega+ = all paths source -> screen point
    LatticeConfig cfg;
    cfg.sites = 5;
    cfg.steps = 4;
    cfg.alpha = 0.6;
    cfg.masks[2] = {1, 3};
    const int source = 2, screen_x = 2;
    auto ctx = lattice_context(cfg, source, screen_x);
    REQUIRE(ctx.path_count() > 0);

    SECTION("empty constraints expand to omega")
    {
        const Event omega = expand_symbolic(Event::symbolic(SymbolicEvent{}), ctx);
        CHECK(omega == ctx.whole_space());
    }

    SECTION("confirm source and screen: the IP event is pure")
    {
        SymbolicEvent c;
        c.confirm = {SpaceTimePoint{0, source}, SpaceTimePoint{4, screen_x}};
        const Event e = expand_symbolic(Event::symbolic(c), ctx);
        CHECK(e == ctx.whole_space()); // all enumerated paths already satisfy both
        CHECK(classify(e, ctx).pure);
    }

    SECTION("confirm at the barrier selects a sub-block, still pure")
    {
        SymbolicEvent c;
        c.confirm = {SpaceTimePoint{2, 1}};
        const Event e = expand_symbolic(Event::symbolic(c), ctx);
        CHECK(!e.empty());
        CHECK(e.size() < ctx.whole_space().size());
        CHECK(classify(e, ctx).pure);
    }

    SECTION("exclusion removes every pair touching the point")
    {
        SymbolicEvent c;
        c.exclude = {SpaceTimePoint{2, 3}};
        const Event e = expand_symbolic(Event::symbolic(c), ctx);
        for (const auto& p : e.pairs()) {
            CHECK(site_at_slice(p.plus, 2) != 3);
            CHECK(site_at_slice(p.minus, 2) != 3);
        }
        CHECK(classify(e, ctx).pure);
    }

    SECTION("contradictory constraints")
    {
        SymbolicEvent c;
        c.confirm = {SpaceTimePoint{2, 1}};
        c.exclude = {SpaceTimePoint{2, 1}};
        CHECK_THROWS_AS(expand_symbolic(Event::symbolic(c), ctx), ConstraintError);
    }

    SECTION("out-of-lattice point")
    {
        SymbolicEvent c;
        c.confirm = {SpaceTimePoint{9, 0}};
        CHECK_THROWS_AS(expand_symbolic(Event::symbolic(c), ctx), ConstraintError);
        SymbolicEvent c2;
        c2.exclude = {SpaceTimePoint{1, 7}};
        CHECK_THROWS_AS(classify(Event::symbolic(c2), ctx), ConstraintError);
    }
}

TEST_CASE("IP-prime product form equals the symbolic measure")
{
    // measure of E_x = (sum over plus legs through x) * conj(sum over
    // minus legs through x); with omega- the reversal of omega+ the two
    // factors are conjugate sums of the same forward amplitudes.
    LatticeConfig cfg;
    cfg.sites = 4;
    cfg.steps = 3;
    cfg.alpha = 1.1;
    auto ctx = lattice_context(cfg, 0, 3);
    const SpaceTimePoint x{2, 2};

    SymbolicEvent c;
    c.confirm = {x};
    const Complex via_event = measure(Event::symbolic(c), ctx);

    Complex through{};
    for (std::size_t i = 0; i < ctx.path_count(); ++i)
        if (ctx.forward_path(i).sites[static_cast<std::size_t>(x.t)] == x.x)
            through += ctx.amplitude(i);
    const Complex product = through * std::conj(through);
    CHECK(std::abs(via_event - product) <= 1e-12 * std::max(1.0, std::abs(product)));
}

TEST_CASE("axiom suite on random contexts")
{
    SECTION("unit-modulus random context passes")
    {
        auto ctx = random_context(8, 3, 120, 2024);
        const AxiomReport report = verify_axioms(ctx, 500, 2024);
        INFO(report.summary());
        CHECK(report.pass);
        CHECK(report.failures == 0);
        CHECK(report.max_additivity_residual <= 1e-10);
        CHECK(report.max_conjugation_residual <= 1e-10);
        CHECK(report.max_factorization_residual <= 1e-10);
        CHECK(report.total_measure_residual <= 1e-12);
        CHECK(report.nonreal_witness);
    }

    SECTION("normalized total measure is one")
    {
        auto ctx = random_context(6, 2, 30, 7).normalized();
        CHECK(std::abs(ctx.total_measure() - Complex{1.0, 0.0}) <= 1e-12);
        CHECK(std::abs(ctx.amplitude_sum() - Complex{1.0, 0.0}) <= 1e-14);
    }

    SECTION("guards")
    {
        CHECK_THROWS_AS(random_context(8, 3, 1500, 1), CapacityError); // |Omega| > 1e6
        CHECK_THROWS_AS(random_context(2, 1, 6, 1), DomainError);      // too few walks
    }
}

TEST_CASE("measure context construction rules")
{
    CHECK_THROWS_AS(amp_context({Complex{1, 0}, Complex{std::nan(""), 0}}, 3), DomainError);
    CHECK_THROWS_AS(MeasureContext(3, 1, {fwd({0, 1}), fwd({0, 1})},
                                   {Complex{1, 0}, Complex{1, 0}}),
                    DomainError); // duplicate path
    CHECK_THROWS_AS(MeasureContext(3, 1, {fwd({0, 5})}, {Complex{1, 0}}), DomainError);
    CHECK_THROWS_AS(MeasureContext(3, 2, {fwd({0, 1})}, {Complex{1, 0}}), DomainError);
    CHECK_THROWS_AS(MeasureContext(3, 1, {bwd({0, 1})}, {Complex{1, 0}}), DomainError);
}
