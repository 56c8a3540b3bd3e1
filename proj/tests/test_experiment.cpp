#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "ctp/config.hpp"
#include "ctp/experiment.hpp"
#include "ctp/measure.hpp"

using namespace ctp;

namespace {

// Small odd lattice with the source on the mirror axis.
SlitExperiment small_symmetric()
{
    SlitExperiment exp;
    exp.config.sites = 7;
    exp.config.steps = 4;
    exp.config.alpha = 0.5;
    exp.source = 3;
    exp.barrier_t = 2;
    exp.slits = {2, 4};
    return exp;
}

} // namespace

TEST_CASE("slit amplitudes")
{
    SECTION("mirror-symmetric geometry gives equal amplitudes at the center")
    {
        const auto exp = small_symmetric();
        const auto amps = slit_amplitudes(exp, 3);
        REQUIRE(amps.size() == 2);
        CHECK(std::abs(amps[0] - amps[1]) <= 1e-13 * std::max(1.0, std::abs(amps[0])));
    }

    SECTION("screen site out of hop reach has exactly zero amplitude")
    {
        auto exp = small_symmetric();
        exp.config.sites = 9;
        exp.config.hop_range = 1;
        exp.source = 4;
        exp.slits = {3, 5};
        // from slit 3 at t=2, two more steps reach sites 1..5 only
        const auto amps = slit_amplitudes(exp, 0);
        CHECK(amps[0] == Complex{});
        CHECK(amps[1] == Complex{});
    }

    SECTION("matches the naive enumeration")
    {
        const auto exp = small_symmetric();
        for (int x = 0; x < exp.config.sites; ++x) {
            const auto fast = slit_amplitudes(exp, x);
            const auto slow = slit_amplitudes_naive(exp, x);
            for (std::size_t k = 0; k < fast.size(); ++k)
                CHECK(std::abs(fast[k] - slow[k]) <= 1e-10);
        }
    }
}

TEST_CASE("pattern composition")
{
    auto exp1 = small_symmetric();
    auto exp2 = small_symmetric();
    exp2.measured = {2};
    const ScreenPattern p1 = pattern(exp1);
    const ScreenPattern p2 = pattern(exp2);

    SECTION("slit amplitudes do not depend on the measured set")
    {
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t x = 0; x < 7; ++x)
                CHECK(p1.slit_amps[k][x] == p2.slit_amps[k][x]);
    }

    SECTION("totals are real and the split identity is bit-exact")
    {
        for (std::size_t x = 0; x < 7; ++x) {
            CHECK(p1.total[x].imag() == 0.0);
            CHECK(p2.total[x].imag() == 0.0);
            CHECK(p1.total[x] == Complex{p1.direct[x], 0.0} + p1.interference[x]);
            CHECK(p2.total[x] == Complex{p2.direct[x], 0.0} + p2.interference[x]);
        }
    }

    SECTION("measuring one of two slits removes the cross term entirely")
    {
        for (std::size_t x = 0; x < 7; ++x) {
            CHECK(p2.interference[x] == Complex{});
            CHECK(p2.total[x].real() == p2.direct[x]);
        }
    }

    SECTION("Exp.1 minus Exp.2 is exactly the interference term")
    {
        for (std::size_t x = 0; x < 7; ++x) {
            const Complex z = p1.slit_amps[0][x] * std::conj(p1.slit_amps[1][x]);
            const Complex cross = z + std::conj(z); // 2 Re(phi1 conj(phi2))
            CHECK(p1.total[x] == p2.total[x] + cross);
        }
    }

    SECTION("constructive center: total is four times one slit intensity")
    {
        const double total = p1.total[3].real();
        const double one = std::norm(p1.slit_amps[0][3]);
        CHECK(total == Catch::Approx(4.0 * one).epsilon(1e-12));
    }

    SECTION("direct column is the same in both experiments")
    {
        for (std::size_t x = 0; x < 7; ++x)
            CHECK(p1.direct[x] == p2.direct[x]);
    }

    SECTION("the unmeasured pattern does interfere")
    {
        const ScreenPattern preset = pattern(preset_config("exp1").experiment());
        double largest = 0.0;
        for (const Complex& z : preset.interference)
            largest = std::max(largest, std::abs(z.real()));
        CHECK(largest > 1e-3 * preset.max_total());
    }
}

TEST_CASE("event decomposition")
{
    auto exp = small_symmetric();

    SECTION("two unmeasured slits give the four-way split")
    {
        const auto classes = event_decomposition(exp, 5);
        REQUIRE(classes.size() == 4);
        CHECK(classes[0].first == EventClass{1, 1});
        CHECK(classes[1].first == EventClass{2, 2});
        CHECK(classes[2].first == EventClass{1, 2});
        CHECK(classes[3].first == EventClass{2, 1});
    }

    SECTION("measured slit drops its interference classes")
    {
        auto measured = exp;
        measured.measured = {2};
        const auto classes = event_decomposition(measured, 5);
        REQUIRE(classes.size() == 2);
        CHECK(classes[0].first == EventClass{1, 1});
        CHECK(classes[1].first == EventClass{2, 2});
    }

    SECTION("off-diagonal classes are conjugate pairs, diagonals nonnegative")
    {
        const auto classes = event_decomposition(exp, 4);
        CHECK(classes[2].second == std::conj(classes[3].second));
        CHECK(classes[0].second.real() >= 0.0);
        CHECK(classes[0].second.imag() == 0.0);
        CHECK(classes[1].second.real() >= 0.0);
    }

    SECTION("decomposition reassembles the pattern total bit-for-bit")
    {
        const ScreenPattern pat = pattern(exp);
        for (int x = 0; x < 7; ++x) {
            const auto classes = event_decomposition(exp, x);
            double direct = 0.0;
            Complex cross{};
            for (const auto& [cls, value] : classes) {
                if (cls.k == cls.l)
                    direct += value.real();
                else if (cls.k < cls.l)
                    cross += value + std::conj(value);
            }
            const auto xi = static_cast<std::size_t>(x);
            CHECK(direct == pat.direct[xi]);
            CHECK(Complex{direct, 0.0} + cross == pat.total[xi]);
        }
    }

    SECTION("sum over classes equals the total")
    {
        const ScreenPattern pat = pattern(exp);
        for (int x = 0; x < 7; ++x) {
            Complex sum{};
            for (const auto& [cls, value] : event_decomposition(exp, x))
                sum += value;
            const auto xi = static_cast<std::size_t>(x);
            CHECK(std::abs(sum - pat.total[xi])
                  <= 1e-12 * std::max(1.0, std::abs(pat.total[xi])));
        }
    }
}

TEST_CASE("decomposition agrees with the measure over the event algebra")
{
    // Small enough for full enumeration: Phi(E_kl) from the symbolic event
    // over the lattice context equals phi_k conj(phi_l).
    auto exp = small_symmetric();
    const int x = 4;
    const auto ctx = lattice_context(exp.masked_config(), exp.source, x);
    const auto amps = slit_amplitudes(exp, x);

    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l) {
            const Complex via_event = measure(slit_class_event(exp, x, k, l), ctx);
            const Complex via_amps = amps[static_cast<std::size_t>(k - 1)]
                * std::conj(amps[static_cast<std::size_t>(l - 1)]);
            CHECK(std::abs(via_event - via_amps)
                  <= 1e-10 * std::max(1.0, std::abs(via_amps)));
            const auto cls = classify(slit_class_event(exp, x, k, l), ctx);
            CHECK(cls.hermitian == (k == l));
            CHECK(cls.pure == (k == l));
        }

    SECTION("the Exp.2 observed event is the union of the diagonal classes")
    {
        const Event e11 = expand_symbolic(slit_class_event(exp, x, 1, 1), ctx);
        const Event e22 = expand_symbolic(slit_class_event(exp, x, 2, 2), ctx);
        const Event e12 = expand_symbolic(slit_class_event(exp, x, 1, 2), ctx);
        REQUIRE(disjoint(e11, e22));
        const Event observed = unite(e11, e22);
        // interference pairs are excluded from the observed event
        for (const auto& p : e12.pairs())
            CHECK_FALSE(observed.contains(p));
        const auto cls = classify(observed, ctx);
        CHECK(cls.mixed);
        CHECK_FALSE(cls.pure);
        // and its measure is the Exp.2 pattern value
        auto measured = exp;
        measured.measured = {2};
        const ScreenPattern p2 = pattern(measured);
        CHECK(std::abs(measure(observed, ctx) - p2.total[x])
              <= 1e-10 * std::max(1.0, std::abs(p2.total[x])));
    }
}

TEST_CASE("null events")
{
    SECTION("destructive amplitudes at the event level give an exact null")
    {
        // phi_1 = a, phi_2 = -a: Phi(E) = 0 exactly, diagonal subevents alive
        const Complex a{0.6, 0.8};
        std::vector<Path> paths{Path{{0, 0}, Orientation::Forward},
                                Path{{1, 1}, Orientation::Forward}};
        MeasureContext ctx(3, 1, paths, {a, -a});
        const Event whole = ctx.whole_space(); // (A u B) x reversed(A u B)
        CHECK(measure(whole, ctx) == Complex{});
        Event::ExplicitSet diag{TrajectoryPair{paths[0], reversed(paths[0])}};
        const Complex sub = measure(Event::explicit_set(diag), ctx);
        CHECK(sub.real() == std::norm(a));
        CHECK(sub.real() > 0.0);
        CHECK(classify(whole, ctx).pure);
    }

    SECTION("default preset exhibits lattice-level witnesses")
    {
        const auto exp = preset_config("exp1").experiment();
        const auto witnesses = find_null_events(exp, 1e-3);
        REQUIRE_FALSE(witnesses.empty());
        const ScreenPattern pat = pattern(exp);
        const double scale = pat.max_total();
        for (int x : witnesses) {
            const auto xi = static_cast<std::size_t>(x);
            CHECK(std::abs(pat.total[xi].real()) <= 1e-3 * scale);
            const double diag = std::max(std::norm(pat.slit_amps[0][xi]),
                                         std::norm(pat.slit_amps[1][xi]));
            CHECK(diag >= 1e-3 * scale);
        }
    }

    SECTION("an additive pattern has no witnesses")
    {
        // total == sum of diagonals, so a vanishing total silences them all
        const auto exp = preset_config("exp1").experiment();
        const ScreenPattern classical = classical_baseline(exp);
        const double scale = classical.max_total();
        int witnesses = 0;
        for (int x = 0; x < classical.sites; ++x) {
            const auto xi = static_cast<std::size_t>(x);
            if (std::abs(classical.total[xi].real()) > 1e-3 * scale)
                continue;
            if (std::norm(classical.slit_amps[0][xi]) >= 1e-3 * scale
                || std::norm(classical.slit_amps[1][xi]) >= 1e-3 * scale)
                ++witnesses;
        }
        CHECK(witnesses == 0);
    }

    SECTION("requires an unmeasured experiment")
    {
        auto exp = preset_config("exp2").experiment();
        CHECK_THROWS_AS(find_null_events(exp, 1e-3), DomainError);
    }
}

TEST_CASE("classical baseline")
{
    auto exp = small_symmetric();

    SECTION("equals the pattern with every slit measured")
    {
        auto all = exp;
        all.measured = {1, 2};
        const ScreenPattern a = classical_baseline(exp);
        const ScreenPattern b = pattern(all);
        for (std::size_t x = 0; x < 7; ++x) {
            CHECK(a.total[x] == b.total[x]);
            CHECK(a.interference[x] == Complex{});
            CHECK(a.total[x].real() == a.direct[x]);
        }
    }

    SECTION("single slit: classical and quantum coincide")
    {
        auto one = exp;
        one.slits = {3};
        const ScreenPattern q = pattern(one);
        const ScreenPattern c = classical_baseline(one);
        for (std::size_t x = 0; x < 7; ++x)
            CHECK(q.total[x] == c.total[x]);
    }

    SECTION("factor two at the symmetric center")
    {
        const ScreenPattern q = pattern(exp);
        const ScreenPattern c = classical_baseline(exp);
        CHECK(c.total[3].real() == Catch::Approx(2.0 * std::norm(q.slit_amps[0][3]))
                                       .epsilon(1e-12));
        CHECK(q.total[3].real() == Catch::Approx(2.0 * c.total[3].real()).epsilon(1e-11));
    }
}

TEST_CASE("pattern totals stay nonnegative via the pure regrouping")
{
    for (const char* name : {"exp1", "exp2", "nslit3m1"}) {
        const auto exp = preset_config(name).experiment();
        const ScreenPattern pat = pattern(exp);
        const double scale = std::max(1.0, pat.max_total());
        for (int x = 0; x < pat.sites; ++x) {
            const auto xi = static_cast<std::size_t>(x);
            // measured diagonals plus one pure unmeasured block
            double regrouped = 0.0;
            Complex unmeasured{};
            for (int k = 1; k <= exp.slit_count(); ++k) {
                if (exp.is_measured(k))
                    regrouped += std::norm(pat.slit_amps[static_cast<std::size_t>(k - 1)][xi]);
                else
                    unmeasured += pat.slit_amps[static_cast<std::size_t>(k - 1)][xi];
            }
            regrouped += std::norm(unmeasured);
            CHECK(regrouped >= 0.0);
            CHECK(std::abs(pat.total[xi].real() - regrouped) <= 1e-10 * scale);
            CHECK(pat.total[xi].real() >= -1e-10 * scale);
        }
    }
}

TEST_CASE("experiment validation")
{
    auto exp = small_symmetric();
    auto bad = exp;
    bad.slits = {2, 2};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = exp;
    bad.slits = {9};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = exp;
    bad.measured = {3};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = exp;
    bad.barrier_t = 4;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = exp;
    bad.config.masks[2] = {1};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = exp;
    bad.source = -1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
