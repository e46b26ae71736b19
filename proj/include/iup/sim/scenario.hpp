#ifndef IUP_SIM_SCENARIO_HPP
#define IUP_SIM_SCENARIO_HPP

#include <string>
#include <vector>

#include "iup/control/session.hpp"
#include "iup/core/types.hpp"
#include "iup/sim/source.hpp"

namespace iup {

// Static one-way delays of the wired path between the application server
// and the node; the radio leg is simulated, not composed.
struct PathTimes {
    TimeUs downlink_oneway_us = 1000;
    TimeUs uplink_oneway_us = 1000;
};

// Declarative experiment description (schema 1).
struct ScenarioSpec {
    int schema = 1;
    std::string name;
    TimeUs duration_us = 0;
    std::uint64_t seed = 1;
    TimeUs measure_window_us = 1'000'000;
    TimeUs settle_us = 3'000'000;  // excluded from per-phase aggregates
    CellConfig cell;
    PathTimes path;
    std::vector<SessionConfig> sessions;
    std::vector<SourceConfig> sources;
    std::vector<ControlUpdate> updates;  // sorted by apply_at_us
};

// Structural validation beyond JSON shape: rule sets validate cleanly,
// sources reference known sessions, updates are ordered and authorized.
std::vector<std::string> validate_scenario(const ScenarioSpec& spec);

}  // namespace iup

#endif
