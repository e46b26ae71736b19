#ifndef IUP_PIPELINE_PIPELINE_HPP
#define IUP_PIPELINE_PIPELINE_HPP

#include <map>
#include <optional>
#include <vector>

#include "iup/core/rules.hpp"
#include "iup/core/types.hpp"
#include "iup/pipeline/tm_queue.hpp"

namespace iup {

// Classifier: matching non-default PDR with the lowest precedence value
// (ties: lowest pdr_id), else the default PDR, else discard (nullopt).
std::optional<QueueId> classify(const PacketRecord& packet, const std::vector<PDR>& pdrs);

// Policer: absent FAR forwards.
ForwardAction police(const PacketRecord& packet, const FAR* far);

struct QueueSelection {
    QueueId queue;
    QueueId next_cursor;
};

// Inter-queue scheduler. `eligible` and `configured` are sorted queue-id
// lists; eligible must be nonempty. RoundRobin picks the first eligible
// queue at/after the cursor (wrapping) and advances the cursor past it;
// StrictPriority picks the lowest priority value (ties: lowest queue id).
QueueSelection select_queue(const PSR& psr, const std::vector<QueueId>& eligible,
                            QueueId cursor, const std::vector<QueueId>& configured);

// Egress pacer. Returns the packet's departure time and advances the
// per-DRB release clock: None passes through, FixedRate spaces packets at
// rate_bps, BdpPacer paces at the UE's USR maximum scheduling rate.
TimeUs pace_release(const TRR& trr, std::uint32_t size_bytes, DrbId drb, const USR* usr,
                    TimeUs now, std::map<DrbId, TimeUs>& next_release);

enum class DrbMappingPolicy { Explicit, Heuristic };

// Assigns flows (via their target queue) to DRBs. Explicit entries in the
// session's drb_map win; otherwise queues with similar traffic-management
// rules (same discipline kind and strict-priority class) share a DRB.
class DrbMapper {
  public:
    DrbId map_flow_to_drb(const SessionRecord& session, QueueId queue,
                          DrbMappingPolicy policy);

  private:
    struct GroupKey {
        QueueDisciplineKind kind;
        std::int32_t priority_class;
        auto operator<=>(const GroupKey&) const = default;
    };
    std::map<GroupKey, DrbId> groups_;
    DrbId next_drb_ = 0;
};

enum class IngressDisposition { Queued, NoPdrDiscard, PolicerDropped, TailDropped };

struct IngressResult {
    IngressDisposition disposition;
    QueueId queue = 0;  // valid unless NoPdrDiscard
};

// One session's traffic-management pipeline: classifier/policer ingress,
// FIFO/CoDel queues, shaper + PSR + pacer egress, and flow->DRB mapping.
// Driven by the event engine; egress is serialized per session so a paced
// packet gates the next PSR selection.
class Pipeline {
  public:
    Pipeline(const SessionRecord& session, TimeUs now);

    IngressResult ingress(PacketRecord packet, TimeUs now);

    struct Egress {
        enum class Kind { Deliver, Wait, Idle } kind = Kind::Idle;
        std::optional<PacketRecord> packet;  // Deliver
        DrbId drb = 0;                       // Deliver
        TimeUs at = 0;                       // Deliver: departure; Wait: wakeup
        std::vector<PacketRecord> codel_drops;
    };

    // Advances the egress pipe by at most one delivered packet. A Deliver
    // with at > now holds the pipe until `at` (pacer gate); callers push the
    // packet into its RLC queue at that time and service again.
    Egress egress_step(TimeUs now);

    // Event-atomic rule swap: queues are created/retuned to the new rules,
    // buffered packets stay in place.
    void apply_rules(const RuleSet& rules, TimeUs now);

    std::vector<PacketRecord> flush_all();

    const RuleSet& rules() const { return rules_; }
    std::uint64_t rule_version() const { return rule_version_; }
    const SessionRecord& session() const { return session_; }

    TmQueue* queue(QueueId id);
    const std::map<QueueId, TmQueue>& queues() const { return queues_; }
    std::size_t buffered_packets() const;
    DrbId drb_for_queue(QueueId q);

  private:
    void reconcile_queues(TimeUs now);

    SessionRecord session_;
    RuleSet rules_;
    std::map<QueueId, TmQueue> queues_;
    QueueId rr_cursor_ = 0;
    std::map<DrbId, TimeUs> pacer_next_release_;
    TimeUs held_until_ = 0;
    DrbMapper drb_mapper_;
    std::uint64_t rule_version_ = 0;
};

}  // namespace iup

#endif
