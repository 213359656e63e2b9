#pragma once

#include <cstddef>
#include <vector>

#include "dermarket/market.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// thresholds[i] is the total supply above which sorted prosumer i starts to
// buy when selling is not allowed. thresholds[0] == 0 and the sequence is
// non-decreasing, so buyers always form a prefix of the sorted order.
struct ThresholdTable {
    std::vector<double> thresholds;
};

// Prefix {0, ..., size-1} of sorted prosumers with strictly positive purchases.
struct ActiveSet {
    std::size_t size = 0;
};

ThresholdTable compute_thresholds(const Scenario& s);

// Active prefix at a given total supply. Supplies within
// 1e-9 * max(1, |y|) of a threshold classify on the inactive side; the
// clearing price is continuous across thresholds, so the tie-break cannot
// move it. Throws SolveError("NonpositiveSupply") for y <= 0 and
// SolveError("EmptyActiveSet") if no prosumer clears the first threshold
// (impossible for supplies that survive the NonpositiveSupply guard, kept as
// an internal assertion).
ActiveSet active_set_at(const ThresholdTable& t, double total_supply);

// Clearing price when prosumers can only buy: affine in total supply on each
// threshold segment, continuous and strictly decreasing overall. The checked
// variant enforces the admissible price band (0, min_i b_i); the raw variant
// extends each segment formula to any positive supply for the oracles.
double inverse_demand_restricted(const Scenario& s, const ThresholdTable& t,
                                 double total_supply);
double inverse_demand_restricted_raw(const Scenario& s, const ThresholdTable& t,
                                     double total_supply);

// Largest total utility prosumers can reach when their purchases must sum to
// `total_supply` and nobody may sell. Continuous and differentiable in the
// supply with derivative equal to the restricted clearing price.
double aggregate_utility(const Scenario& s, const ThresholdTable& t, double total_supply);

// Truthful bidding without sell-back: price equals marginal cost and each
// prosumer's purchase is the full-participation response clamped at zero.
EquilibriumOutcome solve_restricted_truthful(const Scenario& s);

// Strategic bidding without sell-back. Solves the active-set fixed point:
// each candidate buyer prefix implies a symmetric supply, and the prefix must
// reproduce itself at that supply. Throws SolveError with name
// NoConsistentActiveSet (no prefix is self-consistent) or AmbiguousActiveSet
// (several are).
EquilibriumOutcome solve_restricted_strategic(const Scenario& s);

}  // namespace dermarket
