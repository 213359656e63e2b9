#include "dermarket/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dermarket/equilibrium_full.hpp"
#include "dermarket/equilibrium_restricted.hpp"

namespace dermarket {

namespace {

constexpr std::size_t kMaxBisectionSteps = 200;
constexpr std::size_t kMaxBestResponseRounds = 10000;

// Floor for the total supply handed to the restricted inverse demand: stays
// above the active-set boundary band around zero, so off-equilibrium probes
// of vanishing quantities keep a well-defined (limit) price.
constexpr double kSupplyFloor = 2.5e-9;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double net_demand(const Scenario& s, double price, Participation mode) {
    double total = 0.0;
    for (const Prosumer& p : s.prosumers()) total += prosumer_best_response(p, price, mode);
    return total;
}

}  // namespace

OracleResult dispatch_by_bisection(const Scenario& s, Participation mode,
                                   double supply_price, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("dispatch tolerance must be positive");

    const double hi_limit = s.min_slope() * (1.0 - 1e-9);
    const double lo_limit = std::max(1e-12, supply_price - 1.0);
    if (!(supply_price > lo_limit && supply_price < hi_limit))
        throw OracleError("BracketFailure",
                          "offer price " + num(supply_price) +
                              " cannot be bracketed inside the admissible band (0, " +
                              num(s.min_slope()) + ")");
    const double demand_at_offer = net_demand(s, supply_price, mode);
    if (!(demand_at_offer > 0.0))
        throw OracleError("BracketFailure", "no positive net demand at offer price " +
                                                num(supply_price) + " (demand " +
                                                num(demand_at_offer) + ")");

    // Perfectly elastic supply: nothing below the offer price, more than any
    // possible demand at or above it. Net demand is non-increasing in the
    // price, so excess demand crosses zero exactly once inside the bracket.
    const double oversupply = net_demand(s, lo_limit, mode) + 1.0;
    auto excess = [&](double price) {
        const double supplied = price >= supply_price ? oversupply : 0.0;
        return net_demand(s, price, mode) - supplied;
    };

    double lo = lo_limit;
    double hi = hi_limit;
    std::size_t iterations = 0;
    while (hi - lo > tol) {
        if (++iterations > kMaxBisectionSteps)
            throw OracleError("NonConvergence", "price bracket still " + num(hi - lo) +
                                                    " wide after " +
                                                    std::to_string(kMaxBisectionSteps) +
                                                    " bisection steps");
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket already at machine resolution
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }

    OracleResult result;
    result.price = 0.5 * (lo + hi);
    result.iterations = iterations;
    result.residual = hi - lo;
    result.allocations.reserve(s.prosumer_count());
    double total = 0.0;
    for (const Prosumer& p : s.prosumers()) {
        const double z = prosumer_best_response(p, result.price, mode);
        result.allocations.push_back(z);
        total += z;
    }
    result.total_supply = total;
    return result;
}

OracleResult cournot_best_response(const Scenario& s, Participation mode, double tol,
                                   double damping) {
    if (!(tol > 0.0)) throw std::invalid_argument("step tolerance must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("damping must lie in (0, 1]");

    const double alpha = s.marginal_cost();
    const int generators = s.generator_count();
    const ThresholdTable thresholds = compute_thresholds(s);

    const double truthful_total = net_demand(s, alpha, mode);
    const double quantity_cap = 2.0 * truthful_total;  // no best response can exceed this

    auto profit = [&](double quantity, double others) {
        if (quantity <= 0.0) return 0.0;
        double total = quantity + others;
        double price;
        if (mode == Participation::Full) {
            price = inverse_demand_full_raw(s, total);
        } else {
            total = std::max(total, kSupplyFloor);
            price = inverse_demand_restricted_raw(s, thresholds, total);
        }
        return (price - alpha) * quantity;
    };

    // Maximize the profit on one segment between demand kinks. The profit is
    // exactly quadratic on a segment, so when three wide points certify a
    // concave parabola with an interior vertex, that vertex IS the segment
    // argmax (to rounding) and is returned deterministically; golden-section
    // handles the remaining cases (maximum on a segment edge, degenerate
    // flat profit). Plain golden-section alone leaves the argmax wobbling at
    // the bracket width, which stalls the outer fixed-point iteration.
    auto maximize_segment = [&](double lo, double hi,
                                double others) -> std::pair<double, double> {
        const double mid = 0.5 * (lo + hi);
        const double f_lo = profit(lo, others);
        const double f_mid = profit(mid, others);
        const double f_hi = profit(hi, others);
        const double den = (mid - lo) * (f_mid - f_hi) - (mid - hi) * (f_mid - f_lo);
        if (f_mid > 0.5 * (f_lo + f_hi) && den != 0.0) {  // strictly concave through mid
            const double numer = (mid - lo) * (mid - lo) * (f_mid - f_hi) -
                                 (mid - hi) * (mid - hi) * (f_mid - f_lo);
            const double vertex = mid - 0.5 * numer / den;
            if (vertex > lo && vertex < hi) return {vertex, profit(vertex, others)};
        }

        constexpr double kInvPhi = 0.6180339887498949;
        double a = lo;
        double b = hi;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = profit(x1, others);
        double f2 = profit(x2, others);
        const double target_width = 1e-9 * std::max(1.0, hi - lo);
        while (b - a > target_width) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = profit(x2, others);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = profit(x1, others);
            }
        }
        double best_q = 0.5 * (a + b);
        double best_value = profit(best_q, others);
        if (f_hi > best_value) {
            best_value = f_hi;
            best_q = hi;
        }
        if (f_lo > best_value) {
            best_value = f_lo;
            best_q = lo;
        }
        return {best_q, best_value};
    };

    auto best_response = [&](double others) {
        std::vector<double> cuts{0.0, quantity_cap};
        if (mode == Participation::Restricted) {
            for (double threshold : thresholds.thresholds) {
                const double cut = threshold - others;
                if (cut > 0.0 && cut < quantity_cap) cuts.push_back(cut);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double best_q = 0.0;
        double best_value = 0.0;  // profit(0) == 0
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] - cuts[i] < 1e-12 * std::max(1.0, quantity_cap)) continue;
            const auto [q, value] = maximize_segment(cuts[i], cuts[i + 1], others);
            if (value > best_value) {
                best_value = value;
                best_q = q;
            }
        }
        return best_q;
    };

    double per_generator = truthful_total / generators;
    std::size_t iterations = 0;
    double step = std::numeric_limits<double>::infinity();
    while (step >= tol) {
        if (++iterations > kMaxBestResponseRounds)
            throw OracleError("NonConvergence",
                              "best-response iteration still moving " + num(step) + " after " +
                                  std::to_string(kMaxBestResponseRounds) + " rounds");
        const double others = (generators - 1) * per_generator;
        const double response = best_response(others);
        const double next = (1.0 - damping) * per_generator + damping * response;
        step = std::abs(next - per_generator);
        per_generator = next;
    }

    OracleResult result;
    result.total_supply = generators * per_generator;
    result.price = mode == Participation::Full
                       ? inverse_demand_full_raw(s, result.total_supply)
                       : inverse_demand_restricted_raw(s, thresholds, result.total_supply);
    result.iterations = iterations;
    result.residual = step;
    result.allocations.reserve(s.prosumer_count());
    for (const Prosumer& p : s.prosumers())
        result.allocations.push_back(prosumer_best_response(p, result.price, mode));
    return result;
}

double kkt_residual(const Scenario& s, const EquilibriumOutcome& eq) {
    if (eq.allocations.size() != s.prosumer_count())
        throw SolveError("ModelMismatch",
                         "outcome carries " + std::to_string(eq.allocations.size()) +
                             " allocations for " + std::to_string(s.prosumer_count()) +
                             " prosumers");
    if (is_strategic(eq.model) && !eq.bid_slope)
        throw SolveError("ModelMismatch", "strategic outcome lacks a bid slope");

    const double lambda = eq.price;
    const bool restricted = is_restricted(eq.model);
    double worst = 0.0;
    auto track = [&](double violation) { worst = std::max(worst, std::abs(violation)); };

    double allocation_sum = 0.0;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const Prosumer& p = s.prosumers()[i];
        const double z = eq.allocations[i];
        allocation_sum += z;
        // Lower bound on the trade: z >= 0 when selling is forbidden, else
        // consumption C + z >= 0.
        const double slack = restricted ? z : z + p.capacity;
        const double stationarity = 2.0 * p.curvature * (p.capacity + z) + p.slope - lambda;
        if (slack > 1e-9) {
            track(stationarity);  // interior: multiplier vanishes
        } else {
            track(std::max(0.0, stationarity));  // bound: multiplier >= 0
        }
        track(std::min(slack, 0.0));                  // primal feasibility
        track(std::max(0.0, -stationarity) * slack);  // complementary slackness
    }

    // Generators are dispatched where their (true or tilted) bid meets the price.
    const double bid = is_strategic(eq.model) ? *eq.bid_slope : s.marginal_cost();
    track(bid - lambda);

    // Market clearing and the symmetric split.
    track(allocation_sum - eq.total_supply);
    track(eq.total_supply - eq.per_generator_supply * s.generator_count());
    return worst;
}

Scenario random_scenario(std::mt19937_64& rng, std::size_t max_prosumers, int max_generators) {
    std::uniform_int_distribution<std::size_t> count_dist(1, max_prosumers);
    std::uniform_int_distribution<int> generator_dist(1, max_generators);
    std::uniform_real_distribution<double> curvature_dist(-0.5, -0.01);
    std::uniform_real_distribution<double> slope_dist(8.0, 20.0);
    std::uniform_real_distribution<double> capacity_dist(0.0, 40.0);
    std::uniform_real_distribution<double> cost_dist(1.0, 6.0);

    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Prosumer> prosumers(count_dist(rng));
        for (Prosumer& p : prosumers) {
            p.curvature = curvature_dist(rng);
            p.slope = slope_dist(rng);
            p.capacity = capacity_dist(rng);
        }
        const GeneratorFleet fleet{generator_dist(rng), cost_dist(rng)};
        try {
            Scenario s = Scenario::validate_and_build(std::move(prosumers), fleet);
            // All four models must admit well-posed equilibria inside the
            // assumed ranges. Roughly 5% of in-range draws carry two
            // segment-consistent buyer prefixes in the restricted strategic
            // model (AmbiguousActiveSet); those instances have no closed-form
            // answer to test against, so the sampler rejects them like any
            // other out-of-regime draw.
            solve_full_truthful(s);
            solve_full_strategic(s);
            solve_restricted_truthful(s);
            solve_restricted_strategic(s);
            return s;
        } catch (const ValidationError&) {
            // outside the modeled regime: resample
        } catch (const SolveError&) {
            // range violation or ill-posed active set: resample
        }
    }
    throw OracleError("NonConvergence",
                      "scenario sampling rejected " + std::to_string(kMaxAttempts) +
                          " consecutive draws");
}

}  // namespace dermarket
