#include "dermarket/equilibrium_restricted.hpp"

#include <algorithm>
#include <cmath>
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

// Supplies within this band of a threshold classify on the inactive side.
double boundary_eps(double total_supply) {
    return 1e-9 * std::max(1.0, std::abs(total_supply));
}

// Number of thresholds strictly cleared; never throws, may return 0.
std::size_t prefix_size_at(const ThresholdTable& t, double total_supply) {
    const double eps = boundary_eps(total_supply);
    std::size_t size = 0;
    for (double y_i : t.thresholds) {
        if (!(total_supply > y_i + eps)) break;  // thresholds are non-decreasing
        ++size;
    }
    return size;
}

// Sums over the first `size` sorted prosumers that define the segment's
// affine price: price(y) = (y + demand_shift) / half_curvature.
struct PrefixSums {
    double demand_shift = 0.0;    // sum (C_i + b_i/(2 a_i))
    double half_curvature = 0.0;  // sum 1/(2 a_i)
};

PrefixSums prefix_sums(const Scenario& s, std::size_t size) {
    PrefixSums sums;
    for (std::size_t i = 0; i < size; ++i) {
        const Prosumer& p = s.prosumers()[i];
        sums.demand_shift += p.capacity + p.slope / (2.0 * p.curvature);
        sums.half_curvature += 1.0 / (2.0 * p.curvature);
    }
    return sums;
}

double price_on_prefix(const Scenario& s, std::size_t size, double total_supply) {
    const PrefixSums sums = prefix_sums(s, size);
    return (total_supply + sums.demand_shift) / sums.half_curvature;
}

}  // namespace

ThresholdTable compute_thresholds(const Scenario& s) {
    // Prosumer i starts buying once the prosumers ranked before it no longer
    // absorb the whole supply at prices above its marginal utility at
    // capacity: the threshold is that marginal utility pushed through the
    // inverse demand of the preceding prefix.
    ThresholdTable t;
    t.thresholds.reserve(s.prosumer_count());
    PrefixSums preceding;
    for (const Prosumer& p : s.prosumers()) {
        t.thresholds.push_back(p.autarky_marginal_utility() * preceding.half_curvature -
                               preceding.demand_shift);
        preceding.demand_shift += p.capacity + p.slope / (2.0 * p.curvature);
        preceding.half_curvature += 1.0 / (2.0 * p.curvature);
    }
    return t;
}

ActiveSet active_set_at(const ThresholdTable& t, double total_supply) {
    if (!(total_supply > 0.0))
        throw SolveError("NonpositiveSupply",
                         "active set undefined for total supply " + num(total_supply));
    const std::size_t size = prefix_size_at(t, total_supply);
    if (size == 0)
        throw SolveError("EmptyActiveSet",
                         "no prosumer buys at total supply " + num(total_supply));
    return ActiveSet{size};
}

double inverse_demand_restricted_raw(const Scenario& s, const ThresholdTable& t,
                                     double total_supply) {
    return price_on_prefix(s, active_set_at(t, total_supply).size, total_supply);
}

double inverse_demand_restricted(const Scenario& s, const ThresholdTable& t,
                                 double total_supply) {
    const double price = inverse_demand_restricted_raw(s, t, total_supply);
    if (!(price > 0.0 && price < s.min_slope()))
        throw SolveError("PriceOutOfRange",
                         "supply " + num(total_supply) + " clears at price " + num(price) +
                             ", outside (0, " + num(s.min_slope()) + ")");
    return price;
}

double aggregate_utility(const Scenario& s, const ThresholdTable& t, double total_supply) {
    const ActiveSet active = active_set_at(t, total_supply);
    const double price = price_on_prefix(s, active.size, total_supply);
    // Splitting the supply so that active prosumers share a common marginal
    // utility (the segment price) maximizes the total; inactive prosumers stay
    // at their capacity.
    double total = 0.0;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const Prosumer& p = s.prosumers()[i];
        const double consumption =
            i < active.size ? (price - p.slope) / (2.0 * p.curvature) : p.capacity;
        total += utility(p, consumption);
    }
    return total;
}

EquilibriumOutcome solve_restricted_truthful(const Scenario& s) {
    EquilibriumOutcome eq;
    eq.model = Model::RestrictedTruthful;
    eq.price = s.marginal_cost();
    eq.allocations.reserve(s.prosumer_count());
    std::size_t active = 0;
    double total = 0.0;
    for (const Prosumer& p : s.prosumers()) {
        const double z =
            std::max(0.0, (eq.price - p.slope) / (2.0 * p.curvature) - p.capacity);
        if (z > 0.0) ++active;
        eq.allocations.push_back(z);
        total += z;
    }
    eq.total_supply = total;
    eq.per_generator_supply = total / s.generator_count();
    eq.active_set_size = active;
    eq.welfare = welfare_direct(s, eq);
    assert_assumption_range(s, eq);
    return eq;
}

EquilibriumOutcome solve_restricted_strategic(const Scenario& s) {
    const ThresholdTable thresholds = compute_thresholds(s);
    const double n = s.generator_count();

    // Candidate buyer prefixes: prefix k implies the symmetric per-generator
    // supply sum_{i<k} z_i^truthful / (N+1); it is consistent when the prefix
    // reproduces itself at that supply.
    std::vector<std::size_t> consistent;
    double prefix_truthful_demand = 0.0;
    for (std::size_t k = 1; k <= s.prosumer_count(); ++k) {
        const Prosumer& p = s.prosumers()[k - 1];
        prefix_truthful_demand +=
            (s.marginal_cost() - p.slope) / (2.0 * p.curvature) - p.capacity;
        const double per_generator = prefix_truthful_demand / (n + 1.0);
        if (!(per_generator > 0.0)) continue;
        if (prefix_size_at(thresholds, n * per_generator) == k) consistent.push_back(k);
    }
    if (consistent.empty())
        throw SolveError("NoConsistentActiveSet",
                         "no buyer prefix reproduces itself at its own supply");
    if (consistent.size() > 1)
        throw SolveError("AmbiguousActiveSet",
                         std::to_string(consistent.size()) +
                             " buyer prefixes are simultaneously self-consistent");

    const std::size_t k = consistent.front();
    double active_truthful_demand = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const Prosumer& p = s.prosumers()[i];
        active_truthful_demand +=
            (s.marginal_cost() - p.slope) / (2.0 * p.curvature) - p.capacity;
    }

    EquilibriumOutcome eq;
    eq.model = Model::RestrictedStrategic;
    eq.per_generator_supply = active_truthful_demand / (n + 1.0);
    eq.total_supply = n * eq.per_generator_supply;

    const PrefixSums sums = prefix_sums(s, k);
    eq.price = (n * s.marginal_cost() * sums.half_curvature + sums.demand_shift) /
               ((n + 1.0) * sums.half_curvature);
    eq.allocations.reserve(s.prosumer_count());
    for (const Prosumer& p : s.prosumers())
        eq.allocations.push_back(
            std::max(0.0, (eq.price - p.slope) / (2.0 * p.curvature) - p.capacity));
    eq.bid_slope = eq.price;  // the supply bid crosses demand exactly at the price
    eq.active_set_size = k;
    eq.welfare = welfare_direct(s, eq);
    assert_assumption_range(s, eq);
    return eq;
}

}  // namespace dermarket
