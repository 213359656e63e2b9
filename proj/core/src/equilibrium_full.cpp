#include "dermarket/equilibrium_full.hpp"

#include <cstdio>
#include <string>

#include "dermarket/welfare.hpp"

namespace dermarket {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Net demand of all prosumers at the true marginal cost; also the truthful
// total supply.
double truthful_total_supply(const Scenario& s) {
    double total = 0.0;
    for (const Prosumer& p : s.prosumers())
        total += (s.marginal_cost() - p.slope) / (2.0 * p.curvature) - p.capacity;
    return total;
}

}  // namespace

double inverse_demand_full_raw(const Scenario& s, double total_supply) noexcept {
    const AggregateSums& agg = s.aggregates();
    return (total_supply + agg.total_capacity + agg.weighted_slope_sum) / agg.half_curvature_sum;
}

double inverse_demand_full(const Scenario& s, double total_supply) {
    const double price = inverse_demand_full_raw(s, total_supply);
    if (!(price > 0.0 && price < s.min_slope()))
        throw SolveError("PriceOutOfRange",
                         "supply " + num(total_supply) + " clears at price " + num(price) +
                             ", outside (0, " + num(s.min_slope()) + ")");
    return price;
}

double strategic_supply_full(const Scenario& s) {
    const double per_generator = truthful_total_supply(s) / (s.generator_count() + 1.0);
    if (!(per_generator > 0.0))
        throw SolveError("NonpositiveSupply",
                         "strategic per-generator supply " + num(per_generator) +
                             " is not positive");
    return per_generator;
}

double optimal_bid_slope_full(const Scenario& s) {
    const AggregateSums& agg = s.aggregates();
    const double n = s.generator_count();
    return (n * s.marginal_cost() * agg.half_curvature_sum + agg.total_capacity +
            agg.weighted_slope_sum) /
           ((n + 1.0) * agg.half_curvature_sum);
}

EquilibriumOutcome solve_full_truthful(const Scenario& s) {
    EquilibriumOutcome eq;
    eq.model = Model::FullTruthful;
    eq.price = s.marginal_cost();
    eq.allocations.reserve(s.prosumer_count());
    double total = 0.0;
    for (const Prosumer& p : s.prosumers()) {
        const double z = (eq.price - p.slope) / (2.0 * p.curvature) - p.capacity;
        eq.allocations.push_back(z);
        total += z;
    }
    eq.total_supply = total;
    eq.per_generator_supply = total / s.generator_count();
    eq.welfare = welfare_direct(s, eq);
    assert_assumption_range(s, eq);
    return eq;
}

EquilibriumOutcome solve_full_strategic(const Scenario& s) {
    const AggregateSums& agg = s.aggregates();
    const double n = s.generator_count();

    EquilibriumOutcome eq;
    eq.model = Model::FullStrategic;
    eq.per_generator_supply = strategic_supply_full(s);
    eq.total_supply = n * eq.per_generator_supply;
    eq.price = n * s.marginal_cost() / (n + 1.0) +
               (agg.total_capacity + agg.weighted_slope_sum) /
                   ((n + 1.0) * agg.half_curvature_sum);
    eq.allocations.reserve(s.prosumer_count());
    for (const Prosumer& p : s.prosumers())
        eq.allocations.push_back((eq.price - p.slope) / (2.0 * p.curvature) - p.capacity);
    eq.bid_slope = optimal_bid_slope_full(s);
    eq.welfare = welfare_direct(s, eq);
    assert_assumption_range(s, eq);
    return eq;
}

}  // namespace dermarket
