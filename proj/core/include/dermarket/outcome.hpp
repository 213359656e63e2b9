#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace dermarket {

// The four market regimes: prosumers may either trade in both directions
// ("full") or only buy ("restricted"), and generators either bid their true
// marginal cost ("truthful") or tilt their bids to move the price ("strategic").
enum class Model {
    FullTruthful,
    FullStrategic,
    RestrictedTruthful,
    RestrictedStrategic,
};

constexpr bool is_strategic(Model m) noexcept {
    return m == Model::FullStrategic || m == Model::RestrictedStrategic;
}

constexpr bool is_restricted(Model m) noexcept {
    return m == Model::RestrictedTruthful || m == Model::RestrictedStrategic;
}

// Hyphenated identifiers used by the CLI: "full-truthful", "full-strategic",
// "restricted-truthful", "restricted-strategic".
const char* model_name(Model m) noexcept;
std::optional<Model> model_from_name(std::string_view name) noexcept;

// One solved equilibrium. Allocations follow the scenario's sorted prosumer
// order (non-increasing marginal utility at capacity).
struct EquilibriumOutcome {
    Model model = Model::FullTruthful;
    double price = 0.0;                  // clearing price
    std::vector<double> allocations;     // net purchase z_i of each prosumer
    double per_generator_supply = 0.0;   // y_j, identical across generators
    double total_supply = 0.0;           // N * y_j
    double welfare = 0.0;                // aggregate utility minus true generation cost

    // Slope of the linear supply bid each generator submits; only strategic
    // models carry one (truthful generators bid the flat marginal cost).
    std::optional<double> bid_slope;

    // Number of prosumers with strictly positive purchases; only restricted
    // models record it (it is a prefix of the sorted order).
    std::optional<std::size_t> active_set_size;
};

}  // namespace dermarket
