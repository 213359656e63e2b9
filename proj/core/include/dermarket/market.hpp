#pragma once

#include <cstddef>
#include <vector>

#include "dermarket/errors.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// Whether prosumers may sell surplus self-generation back to the market
// (z_i > -C_i) or are limited to buying (z_i >= 0).
enum class Participation { Full, Restricted };

constexpr Participation participation_of(Model m) noexcept {
    return is_restricted(m) ? Participation::Restricted : Participation::Full;
}

// A consumer with self-generation capacity. Utility from consuming x is
// strictly concave quadratic: u(x) = curvature * x^2 + slope * x with
// curvature < 0 and slope > 0.
struct Prosumer {
    double curvature = 0.0;          // < 0
    double slope = 0.0;              // > 0
    double capacity = 0.0;           // self-generation, >= 0
    std::size_t original_index = 0;  // position in the input list

    // Marginal utility when consuming exactly the own capacity:
    // u'(C) = 2 * curvature * capacity + slope. This is the price below which
    // the prosumer buys a strictly positive amount, and the key prosumers are
    // ranked by.
    double autarky_marginal_utility() const noexcept {
        return 2.0 * curvature * capacity + slope;
    }
};

// Identical generators with linear true cost marginal_cost * y.
struct GeneratorFleet {
    int count = 1;               // N >= 1
    double marginal_cost = 0.0;  // > 0
};

// Sums over all prosumers that recur in every closed-form expression.
struct AggregateSums {
    double total_capacity = 0.0;      // sum_i C_i
    double half_curvature_sum = 0.0;  // sum_i 1/(2 a_i), strictly negative
    double weighted_slope_sum = 0.0;  // sum_i b_i/(2 a_i)
};

AggregateSums compute_aggregates(const std::vector<Prosumer>& prosumers);

// A validated market instance. Prosumers are stored sorted by non-increasing
// autarky marginal utility (ties broken by ascending original_index), so the
// set of buyers at any supply level is always a prefix of the stored order.
class Scenario {
public:
    // Validates every record and the fleet, assigns original_index from the
    // input position, sorts, and checks that at least one prosumer is willing
    // to buy at the generators' marginal cost. Throws ValidationError with
    // names EmptyScenario, CurvatureNotNegative, NonpositiveSlope,
    // NegativeCapacity, EmptyFleet, NonpositiveMarginalCost, NoActiveProsumer.
    static Scenario validate_and_build(std::vector<Prosumer> prosumers, GeneratorFleet fleet);

    const std::vector<Prosumer>& prosumers() const noexcept { return prosumers_; }
    const GeneratorFleet& fleet() const noexcept { return fleet_; }
    const AggregateSums& aggregates() const noexcept { return aggregates_; }

    std::size_t prosumer_count() const noexcept { return prosumers_.size(); }
    int generator_count() const noexcept { return fleet_.count; }
    double marginal_cost() const noexcept { return fleet_.marginal_cost; }

    // min_i b_i: every admissible clearing price lies strictly below it.
    double min_slope() const noexcept { return min_slope_; }

    // Same prosumer population with a different fleet size (used by sweeps).
    Scenario with_generator_count(int count) const;

private:
    Scenario() = default;

    std::vector<Prosumer> prosumers_;
    GeneratorFleet fleet_;
    AggregateSums aggregates_;
    double min_slope_ = 0.0;
};

// u(consumption) for one prosumer; consumption is the post-trade total C_i + z_i.
double utility(const Prosumer& p, double consumption);

// Net purchase that maximizes u(C + z) - price * z at the given price.
// Full participation solves the first-order condition exactly; Restricted
// clamps the result at zero. Requires 0 < price < p.slope, else throws
// SolveError("PriceOutOfRange").
double prosumer_best_response(const Prosumer& p, double price, Participation mode);

// Post-solve guard for the ranges the closed forms promise: price strictly
// inside (0, min_i b_i), total supply strictly positive, and every allocation
// strictly above -C_i (full) or non-negative (restricted), all at absolute
// tolerance 1e-12. Throws SolveError("AssumptionRangeViolated").
void assert_assumption_range(const Scenario& s, const EquilibriumOutcome& eq);

}  // namespace dermarket
