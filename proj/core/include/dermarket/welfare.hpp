#pragma once

#include <array>
#include <utility>

#include "dermarket/market.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// Welfare with no market at all: every prosumer consumes exactly her capacity.
double autarky_welfare(const Scenario& s);

// Social welfare of an outcome from the model-specific closed form, cross
// checked against the definition (sum of utilities minus true generation
// cost) at 1e-9 relative; a larger discrepancy throws
// SolveError("RepresentationMismatch"). Throws SolveError("ModelMismatch")
// when the outcome does not fit the scenario (allocation count, missing
// active set on restricted outcomes).
double welfare_direct(const Scenario& s, const EquilibriumOutcome& eq);

// Welfare expressed around the autarky level w0: truthful models lose only
// the curvature terms of the trades, strategic models add the price rise
// times the traded volume. `price_rise` is ignored for truthful models.
double welfare_reformulated(const Scenario& s, const EquilibriumOutcome& eq,
                            double w0, double price_rise);

// {delta, delta_restricted}: how much strategic bidding lifts the price in
// the full and the restricted market. Each is computed as the plain price
// difference and cross-checked at 1e-10 relative against its closed form in
// the truthful allocations; mismatch throws SolveError("RepresentationMismatch").
std::pair<double, double> price_rises(const Scenario& s,
                                      const EquilibriumOutcome& full_truthful,
                                      const EquilibriumOutcome& full_strategic,
                                      const EquilibriumOutcome& restricted_truthful,
                                      const EquilibriumOutcome& restricted_strategic);

// Welfare levels, price rises, pairwise welfare gaps in closed form, and the
// five welfare orderings that quantify how prosumer participation mitigates
// generator market power.
struct GapReport {
    double w0 = 0.0;   // autarky welfare
    double wT = 0.0;   // full participation, truthful bidding
    double wS = 0.0;   // full participation, strategic bidding
    double wTN = 0.0;  // buying only, truthful bidding
    double wSN = 0.0;  // buying only, strategic bidding

    double delta = 0.0;    // strategic price rise, full participation
    double delta_n = 0.0;  // strategic price rise, buying only

    // Closed-form gap identities, each validated against the direct welfare
    // difference at 1e-6 relative.
    double gap_T_TN = 0.0;   // wT - wTN
    double gap_S_SN = 0.0;   // wS - wSN
    double gap_T_S = 0.0;    // wT - wS
    double gap_TN_SN = 0.0;  // wTN - wSN

    // The five orderings, each accepted when the corresponding difference is
    // >= -1e-9: participation helps under either bidding behaviour, truthful
    // bidding beats strategic bidding in either market, and the strategic
    // welfare loss is smaller with participation than without.
    bool holds_T_ge_TN = false;
    bool holds_S_ge_SN = false;
    bool holds_T_ge_S = false;
    bool holds_TN_ge_SN = false;
    bool holds_mitigation = false;  // (wTN - wSN) >= (wT - wS)

    // Worst relative disagreement between the direct and the reformulated
    // welfare across the four models.
    double representation_mismatch = 0.0;

    bool all_hold() const noexcept {
        return holds_T_ge_TN && holds_S_ge_SN && holds_T_ge_S && holds_TN_ge_SN &&
               holds_mitigation;
    }
};

// Assembles the full report from the four solved outcomes. The outcomes must
// belong to the given scenario and carry the expected models, else
// SolveError("ModelMismatch"); identity violations surface as
// SolveError("RepresentationMismatch").
GapReport gap_identities(const Scenario& s,
                         const EquilibriumOutcome& full_truthful,
                         const EquilibriumOutcome& full_strategic,
                         const EquilibriumOutcome& restricted_truthful,
                         const EquilibriumOutcome& restricted_strategic);

}  // namespace dermarket
