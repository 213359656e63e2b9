#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "dermarket/market.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// What a brute-force solver found; `residual` reports its own convergence
// measure (final bracket width / last fixed-point step), not a comparison
// against the closed forms.
struct OracleResult {
    double price = 0.0;
    std::vector<double> allocations;
    double total_supply = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Clears the market against a perfectly elastic supply offered at
// `supply_price`: bisects the price on [max(1e-12, supply_price - 1),
// min_i b_i * (1 - 1e-9)] until the bracket is narrower than `tol`.
// Knows nothing about the closed forms; used to confirm them. Throws
// OracleError("BracketFailure") when the offered price leaves no positive
// demand or falls outside the bracket, OracleError("NonConvergence") after
// 200 bisection steps.
OracleResult dispatch_by_bisection(const Scenario& s, Participation mode,
                                   double supply_price, double tol);

// Damped simultaneous best-response iteration over symmetric generator
// quantities. Each round maximizes one generator's profit against the
// others' supply by scanning the profit curve segment by segment (the
// restricted demand has kinks where prosumers activate); iteration stops
// when the supply moves less than `tol`. `damping` in (0, 1] is the step
// fraction toward the best response. Throws OracleError("NonConvergence")
// after 10000 rounds.
OracleResult cournot_best_response(const Scenario& s, Participation mode,
                                   double tol, double damping);

// Largest violation across the first-order conditions of an outcome:
// prosumer stationarity with multiplier signs and complementary slackness,
// the dispatch condition (bid meets price), and market clearing. Exactly
// solved outcomes score 0 up to rounding.
double kkt_residual(const Scenario& s, const EquilibriumOutcome& eq);

// Draws a random scenario on which all four models admit well-posed
// equilibria inside the assumed ranges: curvature ~ U(-0.5, -0.01),
// slope ~ U(8, 20), capacity ~ U(0, 40), marginal cost ~ U(1, 6),
// 1..max_prosumers prosumers, 1..max_generators generators. Draws that fail
// validation, leave the admissible ranges, or make any of the four models
// ill-posed (for example an ambiguous restricted-strategic buyer prefix) are
// rejected and resampled. Deterministic given the engine state.
Scenario random_scenario(std::mt19937_64& rng, std::size_t max_prosumers = 6,
                         int max_generators = 10);

}  // namespace dermarket
