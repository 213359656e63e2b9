#include "dermarket/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace dermarket {

namespace {

// Ordering tolerance: a welfare difference counts as non-negative when it is
// >= -1e-9 (absolute), absorbing rounding noise without hiding real violations.
constexpr double kOrderingTol = 1e-9;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double rel_diff(double x, double y) {
    return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

void require_shape(const Scenario& s, const EquilibriumOutcome& eq) {
    if (eq.allocations.size() != s.prosumer_count())
        throw SolveError("ModelMismatch",
                         "outcome carries " + std::to_string(eq.allocations.size()) +
                             " allocations for " + std::to_string(s.prosumer_count()) +
                             " prosumers");
    if (is_restricted(eq.model) && !eq.active_set_size)
        throw SolveError("ModelMismatch",
                         std::string(model_name(eq.model)) + " outcome lacks an active set");
    if (eq.active_set_size && *eq.active_set_size > s.prosumer_count())
        throw SolveError("ModelMismatch",
                         "active set of " + std::to_string(*eq.active_set_size) +
                             " exceeds the prosumer count");
}

void require_model(const EquilibriumOutcome& eq, Model expected) {
    if (eq.model != expected)
        throw SolveError("ModelMismatch", std::string("expected a ") + model_name(expected) +
                                              " outcome, got " + model_name(eq.model));
}

// Welfare by its definition: total utility minus the true generation cost.
double definitional_welfare(const Scenario& s, const EquilibriumOutcome& eq) {
    double total = -s.marginal_cost() * eq.total_supply;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const Prosumer& p = s.prosumers()[i];
        total += utility(p, p.capacity + eq.allocations[i]);
    }
    return total;
}

}  // namespace

double autarky_welfare(const Scenario& s) {
    double total = 0.0;
    for (const Prosumer& p : s.prosumers()) total += utility(p, p.capacity);
    return total;
}

double welfare_direct(const Scenario& s, const EquilibriumOutcome& eq) {
    require_shape(s, eq);
    const double alpha = s.marginal_cost();
    const double n = s.generator_count();
    double closed = 0.0;

    switch (eq.model) {
        case Model::FullTruthful: {
            // Everyone consumes where marginal utility equals alpha.
            for (const Prosumer& p : s.prosumers())
                closed += alpha * p.capacity -
                          (p.slope - alpha) * (p.slope - alpha) / (4.0 * p.curvature);
            break;
        }
        case Model::FullStrategic: {
            const AggregateSums& agg = s.aggregates();
            double price_numerator = 0.0;  // sum [(alpha N + b_i)/(2 a_i) + C_i]
            double quarter_curvature = 0.0;
            double slope_square_term = 0.0;
            double net_cost_term = 0.0;  // sum [C_i - (alpha - b_i)/(2 a_i)]
            for (const Prosumer& p : s.prosumers()) {
                price_numerator += (alpha * n + p.slope) / (2.0 * p.curvature) + p.capacity;
                quarter_curvature += 1.0 / (4.0 * p.curvature);
                slope_square_term += p.slope * p.slope / (4.0 * p.curvature);
                net_cost_term += p.capacity - (alpha - p.slope) / (2.0 * p.curvature);
            }
            const double price = price_numerator / ((n + 1.0) * agg.half_curvature_sum);
            closed = price * price * quarter_curvature - slope_square_term +
                     alpha * n * net_cost_term / (n + 1.0);
            break;
        }
        case Model::RestrictedTruthful: {
            const std::size_t k = *eq.active_set_size;
            for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
                const Prosumer& p = s.prosumers()[i];
                if (i < k)
                    closed += alpha * p.capacity -
                              (p.slope - alpha) * (p.slope - alpha) / (4.0 * p.curvature);
                else
                    closed += utility(p, p.capacity);
            }
            break;
        }
        case Model::RestrictedStrategic: {
            const std::size_t k = *eq.active_set_size;
            double price_numerator = 0.0;
            double half_curvature = 0.0;
            double net_cost_term = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const Prosumer& p = s.prosumers()[i];
                price_numerator += (alpha * n + p.slope) / (2.0 * p.curvature) + p.capacity;
                half_curvature += 1.0 / (2.0 * p.curvature);
                net_cost_term += p.capacity - (alpha - p.slope) / (2.0 * p.curvature);
            }
            const double price = price_numerator / ((n + 1.0) * half_curvature);
            for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
                const Prosumer& p = s.prosumers()[i];
                if (i < k)
                    closed += (price * price - p.slope * p.slope) / (4.0 * p.curvature);
                else
                    closed += utility(p, p.capacity);
            }
            closed += alpha * n * net_cost_term / (n + 1.0);
            break;
        }
    }

    const double definitional = definitional_welfare(s, eq);
    if (rel_diff(closed, definitional) > 1e-9)
        throw SolveError("RepresentationMismatch",
                         std::string(model_name(eq.model)) + " welfare closed form " +
                             num(closed) + " disagrees with the definition " +
                             num(definitional));
    return closed;
}

double welfare_reformulated(const Scenario& s, const EquilibriumOutcome& eq, double w0,
                            double price_rise) {
    require_shape(s, eq);
    double total = w0;
    switch (eq.model) {
        case Model::FullTruthful:
        case Model::RestrictedTruthful:
            for (std::size_t i = 0; i < s.prosumer_count(); ++i)
                total -= s.prosumers()[i].curvature * eq.allocations[i] * eq.allocations[i];
            break;
        case Model::FullStrategic:
        case Model::RestrictedStrategic:
            for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
                const double z = eq.allocations[i];
                total += -s.prosumers()[i].curvature * z * z + price_rise * z;
            }
            break;
    }
    return total;
}

std::pair<double, double> price_rises(const Scenario& s,
                                      const EquilibriumOutcome& full_truthful,
                                      const EquilibriumOutcome& full_strategic,
                                      const EquilibriumOutcome& restricted_truthful,
                                      const EquilibriumOutcome& restricted_strategic) {
    require_model(full_truthful, Model::FullTruthful);
    require_model(full_strategic, Model::FullStrategic);
    require_model(restricted_truthful, Model::RestrictedTruthful);
    require_model(restricted_strategic, Model::RestrictedStrategic);
    require_shape(s, full_truthful);
    require_shape(s, restricted_strategic);

    const double rise_full = full_strategic.price - full_truthful.price;
    const double rise_restricted = restricted_strategic.price - restricted_truthful.price;

    // Closed forms in the truthful allocations.
    const double n = s.generator_count();
    double truthful_sum = 0.0;
    for (double z : full_truthful.allocations) truthful_sum += z;
    const double rise_full_closed =
        -(truthful_sum / (n + 1.0)) / s.aggregates().half_curvature_sum;

    const std::size_t k = *restricted_strategic.active_set_size;
    double active_truthful_sum = 0.0;
    double active_half_curvature = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        active_truthful_sum += full_truthful.allocations[i];
        active_half_curvature += 1.0 / (2.0 * s.prosumers()[i].curvature);
    }
    const double rise_restricted_closed =
        (active_truthful_sum / (n + 1.0)) / (-active_half_curvature);

    if (rel_diff(rise_full, rise_full_closed) > 1e-10)
        throw SolveError("RepresentationMismatch",
                         "full-market price rise " + num(rise_full) +
                             " disagrees with its closed form " + num(rise_full_closed));
    if (rel_diff(rise_restricted, rise_restricted_closed) > 1e-10)
        throw SolveError("RepresentationMismatch",
                         "restricted-market price rise " + num(rise_restricted) +
                             " disagrees with its closed form " + num(rise_restricted_closed));
    return {rise_full, rise_restricted};
}

GapReport gap_identities(const Scenario& s,
                         const EquilibriumOutcome& full_truthful,
                         const EquilibriumOutcome& full_strategic,
                         const EquilibriumOutcome& restricted_truthful,
                         const EquilibriumOutcome& restricted_strategic) {
    require_model(full_truthful, Model::FullTruthful);
    require_model(full_strategic, Model::FullStrategic);
    require_model(restricted_truthful, Model::RestrictedTruthful);
    require_model(restricted_strategic, Model::RestrictedStrategic);
    for (const EquilibriumOutcome* eq :
         {&full_truthful, &full_strategic, &restricted_truthful, &restricted_strategic})
        require_shape(s, *eq);

    GapReport report;
    report.w0 = autarky_welfare(s);
    report.wT = full_truthful.welfare;
    report.wS = full_strategic.welfare;
    report.wTN = restricted_truthful.welfare;
    report.wSN = restricted_strategic.welfare;
    std::tie(report.delta, report.delta_n) =
        price_rises(s, full_truthful, full_strategic, restricted_truthful,
                    restricted_strategic);

    const double n = s.generator_count();
    const std::size_t k = *restricted_strategic.active_set_size;

    // Participation gap under truthful bidding: only would-be sellers matter.
    double gap_T_TN = 0.0;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const double z = full_truthful.allocations[i];
        if (z <= 0.0) gap_T_TN += -s.prosumers()[i].curvature * z * z;
    }

    // Strategic loss with full participation.
    double truthful_sum = 0.0;
    double inverse_curvature_sum = 0.0;  // sum 1/(-a_i)
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        truthful_sum += full_truthful.allocations[i];
        inverse_curvature_sum += 1.0 / (-s.prosumers()[i].curvature);
    }
    const double withheld_share = truthful_sum / (n + 1.0);
    const double gap_T_S = withheld_share * withheld_share / inverse_curvature_sum;

    // Strategic loss without participation: buyers squeezed out entirely plus
    // the withholding loss over the remaining buyers.
    double gap_TN_SN = 0.0;
    double active_truthful_sum = 0.0;
    double active_inverse_curvature = 0.0;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const double z = full_truthful.allocations[i];
        if (i < k) {
            active_truthful_sum += z;
            active_inverse_curvature += 1.0 / (-s.prosumers()[i].curvature);
        } else if (z > 0.0) {
            gap_TN_SN += -s.prosumers()[i].curvature * z * z;
        }
    }
    const double active_withheld = active_truthful_sum / (n + 1.0);
    gap_TN_SN += active_withheld * active_withheld / active_inverse_curvature;

    // Participation gap under strategic bidding, via the reformulated
    // welfare of both strategic outcomes.
    double gap_S_SN = 0.0;
    for (std::size_t i = 0; i < s.prosumer_count(); ++i) {
        const Prosumer& p = s.prosumers()[i];
        const double z_full = full_strategic.allocations[i];
        const double z_restricted = restricted_strategic.allocations[i];
        gap_S_SN += -p.curvature * z_full * z_full + report.delta * z_full;
        gap_S_SN += p.curvature * z_restricted * z_restricted;
        gap_S_SN -= report.delta_n * z_restricted;
    }

    report.gap_T_TN = gap_T_TN;
    report.gap_T_S = gap_T_S;
    report.gap_TN_SN = gap_TN_SN;
    report.gap_S_SN = gap_S_SN;

    // Every closed-form gap must match the direct welfare difference.
    const double direct_T_TN = report.wT - report.wTN;
    const double direct_T_S = report.wT - report.wS;
    const double direct_TN_SN = report.wTN - report.wSN;
    const double direct_S_SN = report.wS - report.wSN;
    const double worst_gap_mismatch =
        std::max({rel_diff(gap_T_TN, direct_T_TN), rel_diff(gap_T_S, direct_T_S),
                  rel_diff(gap_TN_SN, direct_TN_SN), rel_diff(gap_S_SN, direct_S_SN)});
    if (worst_gap_mismatch > 1e-6)
        throw SolveError("RepresentationMismatch",
                         "closed-form welfare gaps disagree with direct differences by " +
                             num(worst_gap_mismatch) + " relative");

    // Direct vs reformulated welfare, worst over the four models.
    double mismatch = 0.0;
    mismatch = std::max(
        mismatch, rel_diff(report.wT, welfare_reformulated(s, full_truthful, report.w0, 0.0)));
    mismatch = std::max(mismatch,
                        rel_diff(report.wS, welfare_reformulated(s, full_strategic, report.w0,
                                                                 report.delta)));
    mismatch = std::max(mismatch, rel_diff(report.wTN, welfare_reformulated(
                                               s, restricted_truthful, report.w0, 0.0)));
    mismatch = std::max(mismatch,
                        rel_diff(report.wSN, welfare_reformulated(s, restricted_strategic,
                                                                  report.w0, report.delta_n)));
    report.representation_mismatch = mismatch;

    report.holds_T_ge_TN = direct_T_TN >= -kOrderingTol;
    report.holds_S_ge_SN = direct_S_SN >= -kOrderingTol;
    report.holds_T_ge_S = direct_T_S >= -kOrderingTol;
    report.holds_TN_ge_SN = direct_TN_SN >= -kOrderingTol;
    report.holds_mitigation = direct_TN_SN - direct_T_S >= -kOrderingTol;
    return report;
}

}  // namespace dermarket
