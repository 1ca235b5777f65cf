#pragma once

#include <iosfwd>
#include <string>

#include "ri/scenario.hpp"

namespace ri {

/// Load a scenario from the flat key/value format with typed sections
/// (workspace, init, goal, params, planner, obstacle...). Parsing is strict:
/// unknown sections or keys, duplicates, and missing required keys are
/// rejected. Throws ParseError (with line number) or ValidationError.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& is, const std::string& origin);

}  // namespace ri
