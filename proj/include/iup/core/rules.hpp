#ifndef IUP_CORE_RULES_HPP
#define IUP_CORE_RULES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iup/core/types.hpp"

namespace iup {

// Packet-match predicates. Absent fields are wildcards; a default spec
// matches everything.
struct MatchSpec {
    std::optional<IpAddr> src_ip;
    std::optional<IpAddr> dst_ip;
    std::optional<std::uint16_t> src_port;
    std::optional<std::uint16_t> dst_port;
    std::optional<std::uint8_t> protocol;
    std::optional<std::uint8_t> dscp;
    bool is_default = false;

    bool has_predicate() const {
        return src_ip || dst_ip || src_port || dst_port || protocol || dscp;
    }
};

bool matches(const MatchSpec& spec, const PacketRecord& packet);

// Packet Detection Rule: classifier entry. Lower precedence value wins;
// ties break on lower pdr_id.
struct PDR {
    std::uint32_t pdr_id = 0;
    std::int32_t precedence = 0;
    MatchSpec match;
    QueueId target_queue = 0;
    bool is_default = false;
};

enum class ForwardAction { Forward, Drop };

// Forwarding Action Rule: policer action for one queue.
struct FAR {
    QueueId queue = 0;
    ForwardAction action = ForwardAction::Forward;
};

enum class QueueDisciplineKind { Fifo, CoDel };

struct QueueDiscipline {
    QueueDisciplineKind kind = QueueDisciplineKind::Fifo;
    std::uint32_t capacity_packets = 1000;
    // CoDel parameters (RFC 8289 defaults).
    TimeUs target_us = 5'000;
    TimeUs interval_us = 100'000;

    static QueueDiscipline fifo(std::uint32_t capacity = 1000) {
        return {QueueDisciplineKind::Fifo, capacity, 0, 0};
    }
    static QueueDiscipline codel(TimeUs target = 5'000, TimeUs interval = 100'000,
                                 std::uint32_t capacity = 1000) {
        return {QueueDisciplineKind::CoDel, capacity, target, interval};
    }
    friend bool operator==(const QueueDiscipline&, const QueueDiscipline&) = default;
};

// Buffer Action Rule: queue management discipline for one queue.
struct BAR {
    QueueId queue = 0;
    QueueDiscipline discipline;
};

// Queuing Rate Rule: token-bucket shaper limiting one queue's egress rate.
struct QRR {
    QueueId queue = 0;
    std::uint64_t rate_bps = 0;      // 0 = queue blocked
    std::uint32_t burst_bytes = 1500;
};

enum class PsrPolicy { RoundRobin, StrictPriority };

// Packet Scheduling Rule: inter-queue scheduler for the egress pipe.
struct PSR {
    PsrPolicy policy = PsrPolicy::RoundRobin;
    std::map<QueueId, std::int32_t> priorities;  // StrictPriority: lower = served first
};

enum class TrrMode { None, FixedRate, BdpPacer };

// Transmission Rate Rule: egress pacer. BdpPacer paces at the UE's USR
// maximum scheduling rate.
struct TRR {
    TrrMode mode = TrrMode::None;
    std::uint64_t rate_bps = 0;  // FixedRate only
};

// UE Scheduling Rule for the MAC radio-resource scheduler.
struct USR {
    UeId ue_id = 0;
    std::uint64_t max_rate_bps = 0;  // > 0
    std::optional<TimeUs> deadline_us;
};

// DRB Scheduling Rule: weight for splitting a UE's allocation across DRBs.
struct DSR {
    DrbId drb_id = 0;
    std::uint32_t weight = 1;  // >= 1
};

struct RuleSet {
    std::vector<PDR> pdrs;
    std::vector<FAR> fars;
    std::vector<BAR> bars;
    std::vector<QRR> qrrs;
    PSR psr;
    TRR trr;
    std::vector<DSR> dsrs;
    std::optional<USR> usr;

    const FAR* far_for(QueueId q) const;
    const BAR* bar_for(QueueId q) const;
    const QRR* qrr_for(QueueId q) const;
    std::vector<QueueId> queue_ids() const;  // sorted ids of all BAR-configured queues
};

enum class SessionState { Active, Releasing };

struct SessionRecord {
    SessionId session_id = 0;
    UeId ue_id = 0;
    IpAddr allocated_ip;
    RuleSet rules;
    std::map<QueueId, DrbId> drb_map;  // explicit queue -> DRB assignments
    SessionState state = SessionState::Active;
};

// A single rule-validation failure. `where` identifies the offending rule.
struct RuleViolation {
    std::string where;
    std::string reason;
};

// Checks every RuleSet invariant and returns all violations in a
// deterministic order (by rule kind, then rule id). Empty result = valid.
std::vector<RuleViolation> validate_rule_set(const RuleSet& rules);

}  // namespace iup

#endif
