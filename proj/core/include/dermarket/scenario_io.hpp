#pragma once

#include <filesystem>
#include <string>

#include "dermarket/market.hpp"
#include "dermarket/outcome.hpp"

namespace dermarket {

// Builds a Scenario from a JSON document of the form
//
//   {
//     "prosumers": [{"a": -0.1, "b": 10.0, "capacity": 10.0}, ...],
//     "generators": {"count": 1, "marginal_cost": 5.0}
//   }
//
// Unknown keys anywhere are rejected, every number must be finite, and
// "count" must be an integer. Structural problems throw ParseError; values
// that parse but violate the market assumptions throw ValidationError from
// Scenario::validate_and_build.
Scenario parse_scenario(const std::string& json_text);

// parse_scenario over the contents of a file; unreadable files throw ParseError.
Scenario load_scenario(const std::filesystem::path& path);

// Machine-readable outcome (full double precision round-trip).
std::string outcome_to_json(const EquilibriumOutcome& eq);

// Human-readable outcome for terminal use.
std::string outcome_to_table(const EquilibriumOutcome& eq);

}  // namespace dermarket
