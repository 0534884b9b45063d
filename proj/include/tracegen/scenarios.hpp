#ifndef TRACEGEN_SCENARIOS_HPP
#define TRACEGEN_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tracegen {

struct ScenarioResult {
    std::string name;
    bool pass = false;
    std::string detail; // one line per sub-check
};

struct ScenarioInfo {
    std::string name;
    std::string summary;
    bool acceptance = true; // false for deliberate-failure demos
};

const std::vector<ScenarioInfo>& scenario_list();

// Runs one named scenario; seed falls back to the scenario's built-in seed.
ScenarioResult run_scenario(const std::string& name, std::optional<std::uint64_t> seed = {});

} // namespace tracegen

#endif
