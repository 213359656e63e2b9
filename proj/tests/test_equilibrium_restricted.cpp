#include <cmath>
#include <vector>

#include <doctest.h>

#include "dermarket/equilibrium_full.hpp"
#include "dermarket/equilibrium_restricted.hpp"
#include "dermarket/market.hpp"
#include "dermarket/welfare.hpp"

#include "test_util.hpp"

using namespace dermarket;
using testutil::thrown_name;

TEST_CASE("activation thresholds from the sorted prefix sums") {
    const Scenario s = testutil::reference_scenario();
    const ThresholdTable t = compute_thresholds(s);
    REQUIRE(t.thresholds.size() == 2);
    CHECK(t.thresholds[0] == 0.0);
    CHECK(t.thresholds[1] == doctest::Approx(20.0).epsilon(1e-12));

    const ThresholdTable single = compute_thresholds(testutil::single_prosumer_scenario());
    REQUIRE(single.thresholds.size() == 1);
    CHECK(single.thresholds[0] == 0.0);

    // Identical prosumers activate together: the second threshold collapses to zero.
    const Scenario twins = Scenario::validate_and_build(
        {{-0.1, 10.0, 10.0, 0}, {-0.1, 10.0, 10.0, 0}}, {1, 5.0});
    const ThresholdTable tt = compute_thresholds(twins);
    REQUIRE(tt.thresholds.size() == 2);
    CHECK(tt.thresholds[0] == 0.0);
    CHECK(std::abs(tt.thresholds[1]) <= 1e-12);

    for (std::size_t i = 0; i + 1 < tt.thresholds.size(); ++i)
        CHECK(tt.thresholds[i] <= tt.thresholds[i + 1]);
}

TEST_CASE("active set is the prefix whose thresholds the supply clears") {
    const ThresholdTable t = compute_thresholds(testutil::reference_scenario());

    CHECK(active_set_at(t, 7.5).size == 1);
    CHECK(active_set_at(t, 25.0).size == 2);
    // Exactly at a threshold the prosumer has not activated yet.
    CHECK(active_set_at(t, 20.0).size == 1);
    // Just past the relative boundary band it has.
    CHECK(active_set_at(t, 20.0 * (1.0 + 1e-7)).size == 2);

    CHECK(thrown_name<SolveError>([&] { active_set_at(t, 0.0); }) == "NonpositiveSupply");
    CHECK(thrown_name<SolveError>([&] { active_set_at(t, -4.0); }) == "NonpositiveSupply");
}

TEST_CASE("restricted inverse demand is continuous and strictly decreasing") {
    const Scenario s = testutil::reference_scenario();
    const ThresholdTable t = compute_thresholds(s);

    CHECK(inverse_demand_restricted(s, t, 7.5) == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(inverse_demand_restricted(s, t, 15.0) == doctest::Approx(5.0).epsilon(1e-12));

    // Continuity across the activation threshold at y = 20: both one-sided
    // formulas give 4.
    const double left = inverse_demand_restricted(s, t, 20.0 - 1e-9);
    const double right = inverse_demand_restricted(s, t, 20.0 + 1e-9);
    CHECK(std::abs(left - 4.0) <= 1e-6);
    CHECK(std::abs(right - 4.0) <= 1e-6);

    double last = inverse_demand_restricted(s, t, 0.5);
    for (double y = 1.0; y <= 30.0; y += 0.5) {
        const double price = inverse_demand_restricted(s, t, y);
        CHECK(price < last);
        last = price;
    }

    CHECK(thrown_name<SolveError>([&] { inverse_demand_restricted(s, t, 0.0); }) ==
          "NonpositiveSupply");
    // Supply so large the price would leave (0, min b).
    CHECK(thrown_name<SolveError>([&] { inverse_demand_restricted(s, t, 500.0); }) ==
          "PriceOutOfRange");
    CHECK(inverse_demand_restricted_raw(s, t, 500.0) < 0.0);
}

TEST_CASE("aggregate consumption utility and its supply derivative") {
    const Scenario s = testutil::reference_scenario();
    const ThresholdTable t = compute_thresholds(s);

    // At y = 7.5 only the first prosumer buys: u(17.5) + u(30) = 144.375 + 210.
    CHECK(aggregate_utility(s, t, 7.5) == doctest::Approx(354.375).epsilon(1e-12));

    // Vanishing supply approaches the no-market utility level.
    CHECK(aggregate_utility(s, t, 1e-7) == doctest::Approx(300.0).epsilon(1e-6));

    // The derivative in the supply is the clearing price, also across the
    // threshold at y = 20.
    const double h = 1e-6;
    for (double y : {7.5, 15.0, 20.0 - 0.5 * h, 20.0, 20.0 + 0.5 * h, 25.0}) {
        const double derivative =
            (aggregate_utility(s, t, y + h) - aggregate_utility(s, t, y - h)) / (2.0 * h);
        CHECK(std::abs(derivative - inverse_demand_restricted(s, t, y)) <= 1e-4);
    }

    CHECK(thrown_name<SolveError>([&] { aggregate_utility(s, t, -1.0); }) ==
          "NonpositiveSupply");
}

TEST_CASE("truthful buy-only equilibrium clamps sellers out of the market") {
    const Scenario s = testutil::reference_scenario();
    const EquilibriumOutcome eq = solve_restricted_truthful(s);

    CHECK(eq.model == Model::RestrictedTruthful);
    CHECK(eq.price == doctest::Approx(5.0).epsilon(1e-12));
    REQUIRE(eq.allocations.size() == 2);
    CHECK(eq.allocations[0] == doctest::Approx(15.0));
    CHECK(eq.allocations[1] == 0.0);
    CHECK(eq.total_supply == doctest::Approx(15.0));
    REQUIRE(eq.active_set_size.has_value());
    CHECK(*eq.active_set_size == 1);
    CHECK_FALSE(eq.bid_slope.has_value());

    const EquilibriumOutcome two = solve_restricted_truthful(s.with_generator_count(2));
    CHECK(two.per_generator_supply == doctest::Approx(7.5));
    CHECK(two.total_supply == doctest::Approx(15.0));
}

TEST_CASE("buy-only equilibria coincide with full participation when nobody sells") {
    const Scenario s = testutil::all_buyers_scenario();

    const EquilibriumOutcome full_t = solve_full_truthful(s);
    const EquilibriumOutcome rest_t = solve_restricted_truthful(s);
    CHECK(rest_t.price == doctest::Approx(full_t.price).epsilon(1e-12));
    CHECK(rest_t.total_supply == doctest::Approx(full_t.total_supply).epsilon(1e-12));
    for (std::size_t i = 0; i < full_t.allocations.size(); ++i)
        CHECK(rest_t.allocations[i] == doctest::Approx(full_t.allocations[i]).epsilon(1e-12));

    const EquilibriumOutcome full_s = solve_full_strategic(s);
    const EquilibriumOutcome rest_s = solve_restricted_strategic(s);
    CHECK(rest_s.price == doctest::Approx(full_s.price).epsilon(1e-12));
    CHECK(rest_s.total_supply == doctest::Approx(full_s.total_supply).epsilon(1e-12));
    CHECK(*rest_s.active_set_size == s.prosumer_count());
}

TEST_CASE("strategic buy-only equilibrium with one generator") {
    const Scenario s = testutil::reference_scenario();
    const EquilibriumOutcome eq = solve_restricted_strategic(s);

    CHECK(eq.model == Model::RestrictedStrategic);
    CHECK(eq.price == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(eq.per_generator_supply == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(eq.total_supply == doctest::Approx(7.5).epsilon(1e-12));
    REQUIRE(eq.allocations.size() == 2);
    CHECK(eq.allocations[0] == doctest::Approx(7.5));
    CHECK(eq.allocations[1] == 0.0);
    REQUIRE(eq.active_set_size.has_value());
    CHECK(*eq.active_set_size == 1);
    REQUIRE(eq.bid_slope.has_value());
    CHECK(*eq.bid_slope == doctest::Approx(6.5).epsilon(1e-12));
}

TEST_CASE("strategic buy-only equilibrium across fleet sizes") {
    const Scenario s = testutil::reference_scenario();

    const EquilibriumOutcome two = solve_restricted_strategic(s.with_generator_count(2));
    CHECK(two.price == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(two.total_supply == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(two.allocations[0] == doctest::Approx(10.0));
    CHECK(two.allocations[1] == 0.0);

    const EquilibriumOutcome twenty = solve_restricted_strategic(s.with_generator_count(20));
    CHECK(twenty.price == doctest::Approx(36.0 / 7.0).epsilon(1e-9));    // about 5.1429
    CHECK(twenty.total_supply == doctest::Approx(100.0 / 7.0).epsilon(1e-9));  // about 14.286
}

TEST_CASE("strategic buy-only fixed point reproduces itself") {
    for (int n : {1, 2, 5, 20}) {
        const Scenario s = testutil::reference_scenario(n);
        const EquilibriumOutcome eq = solve_restricted_strategic(s);
        const ThresholdTable t = compute_thresholds(s);

        // Re-derive the candidate supply from the active set the solution
        // reports; the fixed point must reproduce the per-generator supply.
        const ActiveSet active = active_set_at(t, eq.total_supply);
        CHECK(active.size == *eq.active_set_size);
        double demand_sum = 0.0;
        for (std::size_t i = 0; i < active.size; ++i) {
            const Prosumer& p = s.prosumers()[i];
            demand_sum += (s.marginal_cost() - p.slope) / (2.0 * p.curvature) - p.capacity;
        }
        const double reproduced = demand_sum / (n + 1.0);
        CHECK(std::abs(reproduced - eq.per_generator_supply) <=
              1e-10 * std::max(1.0, std::abs(eq.per_generator_supply)));
    }
}

TEST_CASE("strategic buy-only price exceeds marginal cost and vanishes with competition") {
    const Scenario s = testutil::reference_scenario();
    const double markup_one = solve_restricted_strategic(s).price - s.marginal_cost();
    CHECK(markup_one > 0.0);

    const double far_price =
        solve_restricted_strategic(s.with_generator_count(1000)).price;
    CHECK(far_price > s.marginal_cost());
    CHECK(std::abs(far_price - s.marginal_cost()) <= 2.0 * markup_one / 1000.0);
}

TEST_CASE("buy-only allocations are never negative and inactive prosumers sit at capacity") {
    for (int n : {1, 2, 20}) {
        const Scenario s = testutil::reference_scenario(n);
        for (const EquilibriumOutcome& eq :
             {solve_restricted_truthful(s), solve_restricted_strategic(s)}) {
            for (std::size_t i = 0; i < eq.allocations.size(); ++i) {
                CHECK(eq.allocations[i] >= 0.0);
                if (i >= *eq.active_set_size) CHECK(eq.allocations[i] == 0.0);
            }
        }
    }
}
