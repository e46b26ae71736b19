#ifndef IUP_SIM_SOURCE_HPP
#define IUP_SIM_SOURCE_HPP

#include <algorithm>
#include <cstdint>

#include "iup/core/types.hpp"

namespace iup {

enum class SourceKind { Cbr, Aimd };

struct AimdParams {
    std::uint32_t mss_bytes = 1440;
    std::uint32_t wire_bytes = 1500;
    double initial_cwnd_bytes = 14400.0;  // 10 MSS
    double max_cwnd_bytes = 393216.0;     // socket-buffer analogue
    TimeUs base_rtt_us = 2000;
};

// Reno-like AIMD window arithmetic: additive increase mss^2/cwnd per ack,
// multiplicative decrease to half (floored at one MSS) per loss event.
// No slow start.
struct AimdWindow {
    double cwnd_bytes = 14400.0;
    double max_cwnd_bytes = 393216.0;
    std::uint32_t mss_bytes = 1440;

    void on_ack() {
        cwnd_bytes = std::min(cwnd_bytes + double(mss_bytes) * double(mss_bytes) / cwnd_bytes,
                              max_cwnd_bytes);
    }
    void on_loss() { cwnd_bytes = std::max(cwnd_bytes / 2.0, double(mss_bytes)); }
};

struct SourceConfig {
    SourceKind kind = SourceKind::Aimd;
    FlowId flow_id = 0;
    SessionId session_id = 0;
    FiveTuple flow;  // dst_ip is patched to the session's allocated IP
    std::uint8_t dscp = 0;
    TimeUs start_us = 0;

    // CBR
    std::uint64_t cbr_rate_bps = 0;
    std::uint32_t cbr_packet_bytes = 1000;

    AimdParams aimd;

    // Inter-packet gap for a CBR source.
    TimeUs cbr_interval_us() const {
        return TimeUs(std::uint64_t(cbr_packet_bytes) * 8'000'000 / cbr_rate_bps);
    }
};

}  // namespace iup

#endif
