#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "abk/pressure.hpp"
#include "oracles.hpp"

using namespace abk;

namespace {

const std::string kCases = std::string(ABK_DATA_DIR) + "/cases.csv";
const std::string kPopulation = std::string(ABK_DATA_DIR) + "/population.csv";
const std::string kMoves = std::string(ABK_DATA_DIR) + "/moves.csv";

struct Fixture {
    std::vector<CaseRecord> cases = load_cases(kCases);
    Population pop = load_population(kPopulation, kMoves, cases);
};

// One infector (case 0) in rash over [0, 16); everyone else far in the future.
AugmentedEvents single_infector_events(int m) {
    AugmentedEvents ev;
    ev.e.assign(m, 1e5);
    ev.i.assign(m, 2e5);
    ev.r.assign(m, 3e5);
    ev.tau.assign(m, 4e5);
    ev.q.assign(m, 4.5e5);
    ev.e[0] = -14.0;
    ev.i[0] = -2.5;
    ev.r[0] = 0.0;
    ev.tau[0] = 16.0;
    ev.q[0] = 60.0;
    return ev;
}

}  // namespace

TEST_CASE("pressure on a same-compound FTC target sums all three routes") {
    Fixture fx;
    AugmentedEvents ev = single_infector_events(32);
    ModelParams p{0.041, 0.063, 0.358, 0.8, 0.5, 50.0, 0};
    // Case 1 lives in compound 1 with the infector; group size 33 before the move.
    PressureBreakdown pb = pressure_on(fx.pop.individual_of_case(1), 10.0, p, ev, fx.pop);
    double expected = 0.041 / 31199.0 + 0.063 / 119.0 + 0.358 / 32.0;
    CHECK(pb.total == doctest::Approx(expected).epsilon(1e-12));
    REQUIRE(pb.per_infector.size() == 1);
    CHECK(pb.per_infector[0].first == 0);

    // A non-FTC individual outside the compounds sees only the global route.
    int outsider = static_cast<int>(fx.pop.total()) - 1;
    CHECK(fx.pop.individual(outsider).confession == Confession::NonFTC);
    PressureBreakdown pb_out = pressure_on(outsider, 10.0, p, ev, fx.pop);
    CHECK(pb_out.total == doctest::Approx(0.041 / 31199.0).epsilon(1e-12));

    // No infectives: empty sum.
    PressureBreakdown pb_none = pressure_on(outsider, -5.0, p, ev, fx.pop);
    CHECK(pb_none.total == 0.0);
    CHECK(pb_none.per_infector.empty());
}

TEST_CASE("fever scales the pressure by b") {
    Fixture fx;
    AugmentedEvents ev = single_infector_events(32);
    ModelParams p{0.041, 0.063, 0.358, 0.8, 0.5, 50.0, 0};
    PressureBreakdown fever = pressure_on(fx.pop.individual_of_case(1), -1.0, p, ev, fx.pop);
    PressureBreakdown rash = pressure_on(fx.pop.individual_of_case(1), 1.0, p, ev, fx.pop);
    CHECK(fever.total == doctest::Approx(p.b * rash.total).epsilon(1e-12));
}

TEST_CASE("the move changes the within-compound denominator and membership") {
    Fixture fx;
    AugmentedEvents ev = single_infector_events(32);
    // Make case 7 (a mover) the active infector instead.
    std::swap(ev.e[0], ev.e[7]);
    std::swap(ev.i[0], ev.i[7]);
    std::swap(ev.r[0], ev.r[7]);
    std::swap(ev.tau[0], ev.tau[7]);
    std::swap(ev.q[0], ev.q[7]);
    ev.tau[7] = 40.0;  // stays infectious across the move
    ModelParams p{0.0, 0.0, 0.358, 0.8, 0.5, 50.0, 0};

    int target_c1 = fx.pop.individual_of_case(1);   // compound 1 resident
    int target_c2 = fx.pop.individual_of_case(17);  // compound 2 resident
    // Before the move both mover and case 1 share compound 1 (size 33).
    CHECK(pressure_on(target_c1, 10.0, p, ev, fx.pop).total ==
          doctest::Approx(0.358 / 32.0).epsilon(1e-12));
    CHECK(pressure_on(target_c2, 10.0, p, ev, fx.pop).total == 0.0);
    // Afterwards the mover sits in compound 2 (size 18).
    CHECK(pressure_on(target_c1, 30.0, p, ev, fx.pop).total == 0.0);
    CHECK(pressure_on(target_c2, 30.0, p, ev, fx.pop).total ==
          doctest::Approx(0.358 / 17.0).epsilon(1e-12));
}

TEST_CASE("breakpoints cover stage changes and the move, deduplicated") {
    Fixture fx;
    AugmentedEvents ev;
    ev.e = {5.0};
    ev.i = {10.0};
    ev.r = {12.0};
    ev.tau = {28.0};
    ev.q = {30.0};
    // Build a one-case view against the real population: reuse case 0 only.
    std::vector<double> pts = pressure_breakpoints(ev, fx.pop);
    CHECK(pts == std::vector<double>{10.0, 12.0, 25.0, 28.0});

    AugmentedEvents none;
    CHECK(pressure_breakpoints(none, fx.pop) == std::vector<double>{25.0});

    AugmentedEvents dup;
    dup.e = {5.0, 5.0};
    dup.i = {10.0, 10.0};
    dup.r = {12.0, 12.0};
    dup.tau = {28.0, 28.0};
    dup.q = {30.0, 30.0};
    CHECK(pressure_breakpoints(dup, fx.pop) == std::vector<double>{10.0, 12.0, 25.0, 28.0});
}

TEST_CASE("integrated pressure: empty window and rectangle") {
    Fixture fx;
    AugmentedEvents ev = single_infector_events(32);
    ModelParams p{0.041, 0.063, 0.358, 0.8, 0.5, 50.0, 0};
    int target = fx.pop.individual_of_case(1);
    CHECK(integrated_pressure(target, 3.0, 3.0, p, ev, fx.pop) == 0.0);
    // Constant pressure over [2, 9]: rectangle.
    double level = pressure_on(target, 5.0, p, ev, fx.pop).total;
    CHECK(integrated_pressure(target, 2.0, 9.0, p, ev, fx.pop) ==
          doctest::Approx(7.0 * level).epsilon(1e-12));
}

TEST_CASE("pressure is piecewise constant between breakpoints") {
    Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        auto toy = abk::testing::random_toy(rng, 6, true);
        auto pts = pressure_breakpoints(toy.events, toy.pop);
        REQUIRE(!pts.empty());
        int id = rng.uniform_int(static_cast<int>(toy.pop.total()));
        for (size_t s = 0; s + 1 < pts.size(); ++s) {
            double lo = pts[s], hi = pts[s + 1];
            double ref = pressure_on(id, lo + 0.5 * (hi - lo), toy.params, toy.events, toy.pop).total;
            for (double frac : {0.1, 0.35, 0.8, 0.99}) {
                double t = lo + frac * (hi - lo);
                CHECK(pressure_on(id, t, toy.params, toy.events, toy.pop).total ==
                      doctest::Approx(ref).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("per-infector breakdown is additive") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        auto toy = abk::testing::random_toy(rng, 6, true);
        int id = rng.uniform_int(static_cast<int>(toy.pop.total()));
        double t = toy.events.e[0] + rng.uniform() * 30.0;
        PressureBreakdown pb = pressure_on(id, t, toy.params, toy.events, toy.pop);
        double sum = 0.0;
        for (const auto& [k, a] : pb.per_infector) {
            CHECK(a >= 0.0);
            sum += a;
        }
        CHECK(pb.total == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("breakpoint integration agrees with adaptive quadrature") {
    Rng rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        auto toy = abk::testing::random_toy(rng, 6, true);
        int id = rng.uniform_int(static_cast<int>(toy.pop.total()));
        double t0 = toy.events.e[toy.params.kappa] - 2.0 + 4.0 * rng.uniform();
        double t1 = t0 + 40.0 * rng.uniform();
        double exact = integrated_pressure(id, t0, t1, toy.params, toy.events, toy.pop);
        double quad = abk::testing::panel_quadrature(
            [&](double t) { return pressure_on(id, t, toy.params, toy.events, toy.pop).total; }, t0,
            t1, 0.05);
        CHECK(std::abs(quad - exact) <= 1e-8 * std::max(std::abs(exact), 1e-4));
    }
}
