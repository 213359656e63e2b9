#include "dermarket/market.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

namespace dermarket {

namespace {

// Absolute tolerance for the "strictly positive / strictly inside" guards.
constexpr double kStrictTol = 1e-12;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string prosumer_label(std::size_t original_index) {
    return "prosumer " + std::to_string(original_index);
}

}  // namespace

AggregateSums compute_aggregates(const std::vector<Prosumer>& prosumers) {
    AggregateSums sums;
    for (const Prosumer& p : prosumers) {
        sums.total_capacity += p.capacity;
        sums.half_curvature_sum += 1.0 / (2.0 * p.curvature);
        sums.weighted_slope_sum += p.slope / (2.0 * p.curvature);
    }
    return sums;
}

Scenario Scenario::validate_and_build(std::vector<Prosumer> prosumers, GeneratorFleet fleet) {
    if (prosumers.empty())
        throw ValidationError("EmptyScenario", "at least one prosumer is required");
    for (std::size_t i = 0; i < prosumers.size(); ++i) {
        Prosumer& p = prosumers[i];
        p.original_index = i;
        if (!(p.curvature < 0.0))
            throw ValidationError("CurvatureNotNegative",
                                  prosumer_label(i) + ": curvature must be < 0, got " + num(p.curvature));
        if (!(p.slope > 0.0))
            throw ValidationError("NonpositiveSlope",
                                  prosumer_label(i) + ": slope must be > 0, got " + num(p.slope));
        if (!(p.capacity >= 0.0))
            throw ValidationError("NegativeCapacity",
                                  prosumer_label(i) + ": capacity must be >= 0, got " + num(p.capacity));
    }
    if (fleet.count < 1)
        throw ValidationError("EmptyFleet",
                              "generator count must be >= 1, got " + std::to_string(fleet.count));
    if (!(fleet.marginal_cost > 0.0))
        throw ValidationError("NonpositiveMarginalCost",
                              "marginal cost must be > 0, got " + num(fleet.marginal_cost));

    // Non-increasing autarky marginal utility; stable sort keeps equal keys in
    // input order, which is the documented tie-break.
    std::stable_sort(prosumers.begin(), prosumers.end(), [](const Prosumer& l, const Prosumer& r) {
        return l.autarky_marginal_utility() > r.autarky_marginal_utility();
    });

    if (!(prosumers.front().autarky_marginal_utility() > fleet.marginal_cost))
        throw ValidationError(
            "NoActiveProsumer",
            "no prosumer values consumption above the generators' marginal cost " +
                num(fleet.marginal_cost) + " (best marginal utility at capacity: " +
                num(prosumers.front().autarky_marginal_utility()) + ")");

    Scenario s;
    s.prosumers_ = std::move(prosumers);
    s.fleet_ = fleet;
    s.aggregates_ = compute_aggregates(s.prosumers_);
    s.min_slope_ = std::numeric_limits<double>::infinity();
    for (const Prosumer& p : s.prosumers_) s.min_slope_ = std::min(s.min_slope_, p.slope);
    return s;
}

Scenario Scenario::with_generator_count(int count) const {
    if (count < 1)
        throw ValidationError("EmptyFleet",
                              "generator count must be >= 1, got " + std::to_string(count));
    Scenario copy = *this;
    copy.fleet_.count = count;
    return copy;
}

double utility(const Prosumer& p, double consumption) {
    return p.curvature * consumption * consumption + p.slope * consumption;
}

double prosumer_best_response(const Prosumer& p, double price, Participation mode) {
    if (!(price > 0.0 && price < p.slope))
        throw SolveError("PriceOutOfRange",
                         "price " + num(price) + " outside (0, " + num(p.slope) + ") for " +
                             prosumer_label(p.original_index));
    const double unrestricted = (price - p.slope) / (2.0 * p.curvature) - p.capacity;
    return mode == Participation::Full ? unrestricted : std::max(unrestricted, 0.0);
}

void assert_assumption_range(const Scenario& s, const EquilibriumOutcome& eq) {
    if (eq.allocations.size() != s.prosumer_count())
        throw SolveError("ModelMismatch",
                         "outcome carries " + std::to_string(eq.allocations.size()) +
                             " allocations for " + std::to_string(s.prosumer_count()) +
                             " prosumers");
    if (!(eq.price > kStrictTol))
        throw SolveError("AssumptionRangeViolated",
                         "clearing price " + num(eq.price) + " is not strictly positive");
    if (!(s.min_slope() - eq.price > kStrictTol))
        throw SolveError("AssumptionRangeViolated",
                         "clearing price " + num(eq.price) +
                             " is not strictly below the smallest utility slope " +
                             num(s.min_slope()));
    if (!(eq.total_supply > kStrictTol))
        throw SolveError("AssumptionRangeViolated",
                         "total supply " + num(eq.total_supply) + " is not strictly positive");

    const bool restricted = is_restricted(eq.model);
    for (std::size_t i = 0; i < eq.allocations.size(); ++i) {
        const double z = eq.allocations[i];
        const Prosumer& p = s.prosumers()[i];
        if (restricted) {
            if (!(z >= -kStrictTol))
                throw SolveError("AssumptionRangeViolated",
                                 prosumer_label(p.original_index) + ": purchase " + num(z) +
                                     " is negative in a buy-only market");
        } else {
            if (!(z + p.capacity > kStrictTol))
                throw SolveError("AssumptionRangeViolated",
                                 prosumer_label(p.original_index) + ": net purchase " + num(z) +
                                     " does not keep consumption strictly positive (capacity " +
                                     num(p.capacity) + ")");
        }
    }
}

}  // namespace dermarket
