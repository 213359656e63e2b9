#include "dermarket/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

namespace dermarket {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ParseError(where + ": unknown key \"" + it.key() + "\"");
    }
}

const json& require_key(const json& object, const char* key, const std::string& where) {
    const auto it = object.find(key);
    if (it == object.end()) throw ParseError(where + ": missing key \"" + key + "\"");
    return *it;
}

double require_finite_number(const json& value, const std::string& where) {
    if (!value.is_number()) throw ParseError(where + ": expected a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw ParseError(where + ": number is not finite");
    return v;
}

int require_count(const json& value, const std::string& where) {
    if (!value.is_number_integer()) throw ParseError(where + ": expected an integer");
    const auto raw = value.get<std::int64_t>();
    if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max())
        throw ParseError(where + ": integer out of range");
    return static_cast<int>(raw);
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("top level: expected an object");
    reject_unknown_keys(doc, {"prosumers", "generators"}, "top level");

    const json& prosumer_list = require_key(doc, "prosumers", "top level");
    if (!prosumer_list.is_array()) throw ParseError("prosumers: expected an array");
    std::vector<Prosumer> prosumers;
    prosumers.reserve(prosumer_list.size());
    for (std::size_t i = 0; i < prosumer_list.size(); ++i) {
        const std::string where = "prosumers[" + std::to_string(i) + "]";
        const json& record = prosumer_list[i];
        if (!record.is_object()) throw ParseError(where + ": expected an object");
        reject_unknown_keys(record, {"a", "b", "capacity"}, where);
        Prosumer p;
        p.curvature = require_finite_number(require_key(record, "a", where), where + ".a");
        p.slope = require_finite_number(require_key(record, "b", where), where + ".b");
        p.capacity =
            require_finite_number(require_key(record, "capacity", where), where + ".capacity");
        prosumers.push_back(p);
    }

    const json& generators = require_key(doc, "generators", "top level");
    if (!generators.is_object()) throw ParseError("generators: expected an object");
    reject_unknown_keys(generators, {"count", "marginal_cost"}, "generators");
    GeneratorFleet fleet;
    fleet.count = require_count(require_key(generators, "count", "generators"),
                                "generators.count");
    fleet.marginal_cost = require_finite_number(
        require_key(generators, "marginal_cost", "generators"), "generators.marginal_cost");

    return Scenario::validate_and_build(std::move(prosumers), fleet);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ParseError("cannot read scenario file " + path.string());
    return parse_scenario(buffer.str());
}

std::string outcome_to_json(const EquilibriumOutcome& eq) {
    json j;
    j["model"] = model_name(eq.model);
    j["price"] = eq.price;
    j["allocations"] = eq.allocations;
    j["per_generator_supply"] = eq.per_generator_supply;
    j["total_supply"] = eq.total_supply;
    j["welfare"] = eq.welfare;
    if (eq.bid_slope) j["bid_slope"] = *eq.bid_slope;
    if (eq.active_set_size) j["active_set_size"] = *eq.active_set_size;
    return j.dump(2) + "\n";
}

std::string outcome_to_table(const EquilibriumOutcome& eq) {
    std::ostringstream out;
    auto row = [&out](const char* label, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "  %-22s %.12g\n", label, value);
        out << buf;
    };
    out << "model: " << model_name(eq.model) << "\n";
    row("price", eq.price);
    row("per_generator_supply", eq.per_generator_supply);
    row("total_supply", eq.total_supply);
    row("welfare", eq.welfare);
    if (eq.bid_slope) row("bid_slope", *eq.bid_slope);
    if (eq.active_set_size)
        out << "  active_set_size        " << *eq.active_set_size << "\n";
    out << "  allocations\n";
    for (std::size_t i = 0; i < eq.allocations.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "    z[%zu] = %.12g\n", i, eq.allocations[i]);
        out << buf;
    }
    return out.str();
}

}  // namespace dermarket
