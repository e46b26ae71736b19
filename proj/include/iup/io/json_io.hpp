#ifndef IUP_IO_JSON_IO_HPP
#define IUP_IO_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "iup/control/session.hpp"
#include "iup/path/deployment.hpp"
#include "iup/sim/metrics.hpp"
#include "iup/sim/scenario.hpp"

namespace iup {

using Json = nlohmann::ordered_json;

// Scenario files are fail-closed: unknown fields are rejected so shipped
// experiments stay reproducible.
class ScenarioParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Json rule_set_to_json(const RuleSet& rules);
RuleSet rule_set_from_json(const Json& j, const std::string& ctx);

Json control_update_to_json(const ControlUpdate& update);
ControlUpdate control_update_from_json(const Json& j, const std::string& ctx);

Json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const Json& j);

// Reads, shape-checks and semantically validates a scenario file.
ScenarioSpec parse_scenario(const std::string& path);

Json fitted_config_to_json(const FittedPathConfig& fit);
FittedPathConfig fitted_config_from_json(const Json& j);
FittedPathConfig parse_fitted_config(const std::string& path);

struct OutputConfig {
    std::string out_dir;
    enum class Format { Json, Csv, Both } format = Format::Both;
};

Json report_summary_json(const RunReport& report);
// Columns: t_s,flow_id,throughput_bps,p50_latency_ms,p99_latency_ms,
//          ue_id,rbs_used,rbs_unused,rlc_bytes
std::string report_timeseries_csv(const RunReport& report);

// Writes summary.json / timeseries.csv per the format; returns the paths.
std::vector<std::string> emit_report(const RunReport& report, const OutputConfig& config);

}  // namespace iup

#endif
