#pragma once

#include "dermarket/market.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// Clearing price at which prosumers who can buy and sell absorb exactly
// `total_supply`:
//
//   price(y) = (y + sum_i C_i + sum_i b_i/(2 a_i)) / sum_i 1/(2 a_i),
//
// affine and strictly decreasing in y. Throws SolveError("PriceOutOfRange")
// unless the result lies in (0, min_i b_i).
double inverse_demand_full(const Scenario& s, double total_supply);

// Same affine map without the range guard. The verification oracles probe
// supplies far from equilibrium where the formal price leaves the admissible
// band; the map itself is defined for any real supply.
double inverse_demand_full_raw(const Scenario& s, double total_supply) noexcept;

// Per-generator supply in the symmetric strategic equilibrium. Throws
// SolveError("NonpositiveSupply") if the scenario admits no positive supply.
double strategic_supply_full(const Scenario& s);

// Slope of the linear bid curve each generator submits in the strategic
// equilibrium; the dispatch rule crosses it with demand, so the slope equals
// the strategic clearing price.
double optimal_bid_slope_full(const Scenario& s);

// Truthful bidding: price equals marginal cost, prosumers trade in both
// directions, generators split the net demand evenly.
EquilibriumOutcome solve_full_truthful(const Scenario& s);

// Strategic bidding: each generator withholds supply; the total shrinks to
// N/(N+1) of the truthful level and the price rises accordingly.
EquilibriumOutcome solve_full_strategic(const Scenario& s);

}  // namespace dermarket
