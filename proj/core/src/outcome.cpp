#include "dermarket/outcome.hpp"

namespace dermarket {

const char* model_name(Model m) noexcept {
    switch (m) {
        case Model::FullTruthful: return "full-truthful";
        case Model::FullStrategic: return "full-strategic";
        case Model::RestrictedTruthful: return "restricted-truthful";
        case Model::RestrictedStrategic: return "restricted-strategic";
    }
    return "unknown";
}

std::optional<Model> model_from_name(std::string_view name) noexcept {
    if (name == "full-truthful") return Model::FullTruthful;
    if (name == "full-strategic") return Model::FullStrategic;
    if (name == "restricted-truthful") return Model::RestrictedTruthful;
    if (name == "restricted-strategic") return Model::RestrictedStrategic;
    return std::nullopt;
}

}  // namespace dermarket
