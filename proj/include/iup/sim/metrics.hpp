#ifndef IUP_SIM_METRICS_HPP
#define IUP_SIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iup/core/types.hpp"

namespace iup {

enum class DropCause { Classifier, Policer, QueueTail, CoDel };

const char* to_string(DropCause c);

struct DropCounts {
    std::uint64_t classifier = 0;
    std::uint64_t policer = 0;
    std::uint64_t queue_tail = 0;
    std::uint64_t codel = 0;

    std::uint64_t total() const { return classifier + policer + queue_tail + codel; }
};

// One (measurement window, flow) report row.
struct FlowWindowRow {
    TimeUs t_start = 0;
    FlowId flow_id = 0;
    UeId ue_id = 0;
    double throughput_bps = 0.0;
    double p50_latency_ms = 0.0;
    double p99_latency_ms = 0.0;
    std::uint64_t rbs_used = 0;     // this flow's UE
    std::uint64_t rbs_unused = 0;   // cell-wide in the window
    double rlc_bytes = 0.0;         // mean occupancy of the UE's DRBs
};

struct PhaseFlowSummary {
    FlowId flow_id = 0;
    UeId ue_id = 0;
    double mean_throughput_bps = 0.0;
    double p50_latency_ms = 0.0;
    double p99_latency_ms = 0.0;
    std::uint64_t delivered = 0;
};

struct PhaseUeSummary {
    UeId ue_id = 0;
    std::uint64_t rbs_used = 0;
    double mean_rlc_bytes = 0.0;
};

struct PhaseSummary {
    TimeUs start_us = 0;
    TimeUs end_us = 0;
    std::vector<PhaseFlowSummary> flows;
    std::vector<PhaseUeSummary> ues;
    std::uint64_t unused_rbs = 0;
    std::uint64_t dl_slots = 0;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    TimeUs duration_us = 0;
    TimeUs settle_us = 0;
    std::vector<FlowWindowRow> windows;
    std::vector<PhaseSummary> phases;
    std::uint64_t emitted = 0;
    std::uint64_t delivered = 0;
    DropCounts drops;
    bool conservation_ok = true;
};

// Nearest-rank percentile of an unsorted sample set. q in [0, 1].
double percentile(std::vector<float>& samples, double q);

}  // namespace iup

#endif
