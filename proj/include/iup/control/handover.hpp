#ifndef IUP_CONTROL_HANDOVER_HPP
#define IUP_CONTROL_HANDOVER_HPP

#include <string>
#include <vector>

#include "iup/core/types.hpp"
#include "iup/path/deployment.hpp"

namespace iup {

enum class HandoverMode { FiveG_UpfRealloc, IUP_PeerToPeer };

const char* to_string(HandoverMode m);

struct HandoverStages {
    TimeUs preparation_us = 0;
    TimeUs execution_us = 0;
    TimeUs completion_us = 0;
};

// Indirect-forwarding plan during handover. 5G with UPF reallocation
// forwards source-UPF -> source-gNB -> target-gNB over GTP-U tunnels; IUP
// forwards peer to peer over plain IP (exactly one leg, zero tunnel bytes).
struct HandoverPlan {
    HandoverMode mode = HandoverMode::IUP_PeerToPeer;
    std::vector<PathLeg> forwarding_legs;
    HandoverStages stages;

    int gtp_leg_count() const;
    std::uint64_t tunnel_bytes_per_packet() const;
};

HandoverPlan plan_handover(const std::string& source_node, const std::string& target_node,
                           HandoverMode mode, HandoverStages stages = {});

}  // namespace iup

#endif
