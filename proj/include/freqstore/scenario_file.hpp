#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "freqstore/format.hpp"
#include "freqstore/scenario.hpp"

// Scenario file format: INI-style sections `[grid]`, `[controller]`,
// `[disturbance]`, `[sim]` with `key = value` lines. `#` starts a comment.
// Missing keys fall back to the reference grid, no storage, zero
// disturbance and default SimOptions. Unknown sections or keys are rejected.
// See scenarios/README.md for the key list.

namespace freqstore {

/// Hook applied after the grid, disturbance and sim sections are read and
/// before the controller (and any derived tuning) is resolved.
using ScenarioOverrides = std::function<void(Scenario&)>;

/// Parses a scenario document. `source` names the input in diagnostics.
/// Throws ParseError with the offending line number.
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>",
                        const ScenarioOverrides& overrides = {});

Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

/// Canonical form: per-unit keys, shortest round-trip number formatting.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace freqstore
