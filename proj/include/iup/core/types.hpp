#ifndef IUP_CORE_TYPES_HPP
#define IUP_CORE_TYPES_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iup {

// All simulation times are integer microseconds; rates are bits/second.
using TimeUs = std::int64_t;
using QueueId = std::uint32_t;
using UeId = std::uint32_t;
using DrbId = std::uint32_t;
using SessionId = std::uint32_t;
using FlowId = std::uint32_t;

// Sentinel for "never" (e.g. a shaper with rate 0 blocks its queue forever).
inline constexpr TimeUs kNever = std::numeric_limits<TimeUs>::max();

// IPv4 address, host byte order.
struct IpAddr {
    std::uint32_t value = 0;

    static IpAddr parse(const std::string& dotted);
    std::string to_string() const;

    friend bool operator==(const IpAddr&, const IpAddr&) = default;
    friend auto operator<=>(const IpAddr&, const IpAddr&) = default;
};

struct FiveTuple {
    IpAddr src_ip;
    IpAddr dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t protocol = 0;

    friend bool operator==(const FiveTuple&, const FiveTuple&) = default;
};

// One processing-stage visit, for per-packet tracing.
struct StageStamp {
    const char* stage;
    TimeUs at_us;
};

struct PacketRecord {
    std::uint64_t packet_id = 0;
    FiveTuple flow;
    std::uint8_t dscp = 0;            // 0..63
    std::uint32_t size_bytes = 0;     // > 0, on-wire bytes
    TimeUs created_at = 0;
    std::vector<StageStamp> stage_timestamps;

    // Engine bookkeeping (not part of the wire identity).
    FlowId flow_id = 0;
    std::uint64_t flow_seq = 0;

    void stamp(const char* stage, TimeUs now) {
        stage_timestamps.push_back({stage, now});
    }
    std::uint32_t size_bits() const { return size_bytes * 8; }
};

enum class ServiceClass { LowPriority, LowLatency, HighThroughput, Unclassified };

// DSCP service-class mapping: CS1 (8) low-priority, AF11 (10) low-latency,
// AF21 (18) high-throughput, anything else unclassified.
ServiceClass dscp_service_class(int codepoint);

const char* to_string(ServiceClass c);

struct CellConfig {
    std::uint32_t bandwidth_mhz = 40;
    std::uint32_t scs_khz = 30;
    std::uint32_t tdd_dl_slots = 7;
    std::uint32_t tdd_ul_slots = 2;
    std::uint32_t prb_count = 106;       // standards-table value for 40 MHz / 30 kHz
    std::uint32_t bits_per_rb_per_slot = 970;
    std::uint32_t mimo_layers = 1;

    std::uint32_t tdd_period_slots() const { return tdd_dl_slots + tdd_ul_slots; }
    // 15 kHz -> 1 ms slots, each SCS doubling halves the slot.
    TimeUs slot_duration_us() const { return 1000 * 15 / scs_khz; }

    friend bool operator==(const CellConfig&, const CellConfig&) = default;
};

}  // namespace iup

#endif
