#include "iup/control/handover.hpp"

#include <stdexcept>

namespace iup {

const char* to_string(HandoverMode m) {
    return m == HandoverMode::FiveG_UpfRealloc ? "5g_upf_realloc" : "iup_peer_to_peer";
}

int HandoverPlan::gtp_leg_count() const {
    int n = 0;
    for (const auto& leg : forwarding_legs) n += leg.encap.is_gtp() ? 1 : 0;
    return n;
}

std::uint64_t HandoverPlan::tunnel_bytes_per_packet() const {
    std::uint64_t total = 0;
    for (const auto& leg : forwarding_legs) total += leg.encap.total_bytes();
    return total;
}

HandoverPlan plan_handover(const std::string& source_node, const std::string& target_node,
                           HandoverMode mode, HandoverStages stages) {
    if (source_node.empty() || target_node.empty()) {
        throw std::invalid_argument("plan_handover: unknown node");
    }
    if (source_node == target_node) {
        throw std::invalid_argument("plan_handover: source and target must differ");
    }
    HandoverPlan plan;
    plan.mode = mode;
    plan.stages = stages;
    if (mode == HandoverMode::FiveG_UpfRealloc) {
        plan.forwarding_legs = {
            {"source upf to " + source_node + " (n3)", 2.0, EncapStack::gtp_v4()},
            {source_node + " to " + target_node + " (xn-u)", 3.0, EncapStack::gtp_v4()},
        };
    } else {
        plan.forwarding_legs = {
            {source_node + " to " + target_node + " (peer-to-peer ip)", 3.0,
             EncapStack::plain_ip()},
        };
    }
    return plan;
}

}  // namespace iup
