#pragma once

#include <string>

#include "json.hpp"
#include "levy/process.hpp"

namespace levy {

/// { "a": number, "b": number, "measure": { "kind": ..., ... } }.
/// Unknown or missing fields raise SpecError naming the field.
LevyProcessSpec spec_from_json(const nlohmann::json& doc);

/// Throws SpecError for custom densities carrying non-serializable functions.
nlohmann::json spec_to_json(const LevyProcessSpec& spec);

LevyProcessSpec parse_spec(const std::string& text);
LevyProcessSpec load_spec(const std::string& path);

}  // namespace levy
