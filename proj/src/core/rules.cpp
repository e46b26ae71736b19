#include "iup/core/rules.hpp"

#include <algorithm>
#include <set>

namespace iup {

bool matches(const MatchSpec& spec, const PacketRecord& packet) {
    if (spec.is_default) {
        return true;
    }
    if (spec.src_ip && !(*spec.src_ip == packet.flow.src_ip)) return false;
    if (spec.dst_ip && !(*spec.dst_ip == packet.flow.dst_ip)) return false;
    if (spec.src_port && *spec.src_port != packet.flow.src_port) return false;
    if (spec.dst_port && *spec.dst_port != packet.flow.dst_port) return false;
    if (spec.protocol && *spec.protocol != packet.flow.protocol) return false;
    if (spec.dscp && *spec.dscp != packet.dscp) return false;
    return true;
}

const FAR* RuleSet::far_for(QueueId q) const {
    for (const auto& f : fars) {
        if (f.queue == q) return &f;
    }
    return nullptr;
}

const BAR* RuleSet::bar_for(QueueId q) const {
    for (const auto& b : bars) {
        if (b.queue == q) return &b;
    }
    return nullptr;
}

const QRR* RuleSet::qrr_for(QueueId q) const {
    for (const auto& r : qrrs) {
        if (r.queue == q) return &r;
    }
    return nullptr;
}

std::vector<QueueId> RuleSet::queue_ids() const {
    std::vector<QueueId> ids;
    for (const auto& b : bars) ids.push_back(b.queue);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

namespace {

void add(std::vector<RuleViolation>& out, std::string where, std::string reason) {
    out.push_back({std::move(where), std::move(reason)});
}

}  // namespace

std::vector<RuleViolation> validate_rule_set(const RuleSet& rules) {
    std::vector<RuleViolation> out;
    const auto queues = rules.queue_ids();
    auto queue_exists = [&](QueueId q) {
        return std::binary_search(queues.begin(), queues.end(), q);
    };

    // PDRs, in pdr_id order.
    std::vector<PDR> pdrs = rules.pdrs;
    std::sort(pdrs.begin(), pdrs.end(),
              [](const PDR& a, const PDR& b) { return a.pdr_id < b.pdr_id; });
    std::set<std::uint32_t> pdr_ids;
    int defaults = 0;
    for (const auto& p : pdrs) {
        const std::string where = "pdr " + std::to_string(p.pdr_id);
        if (!pdr_ids.insert(p.pdr_id).second) {
            add(out, where, "duplicate pdr_id");
        }
        if (p.is_default) {
            ++defaults;
            if (defaults > 1) add(out, where, "more than one default PDR");
        } else if (!p.match.has_predicate()) {
            add(out, where, "match has no predicate and is not default");
        }
        if (!queue_exists(p.target_queue)) {
            add(out, where,
                "targets queue " + std::to_string(p.target_queue) + " with no BAR");
        }
    }

    // FARs: one per queue, must reference a configured queue.
    std::set<QueueId> far_queues;
    for (const auto& f : rules.fars) {
        const std::string where = "far queue " + std::to_string(f.queue);
        if (!far_queues.insert(f.queue).second) add(out, where, "more than one FAR for queue");
        if (!queue_exists(f.queue)) add(out, where, "references queue with no BAR");
    }

    // BARs: one per queue, sane discipline parameters.
    std::set<QueueId> bar_queues;
    for (const auto& b : rules.bars) {
        const std::string where = "bar queue " + std::to_string(b.queue);
        if (!bar_queues.insert(b.queue).second) add(out, where, "more than one BAR for queue");
        if (b.discipline.capacity_packets < 1) add(out, where, "capacity must be >= 1");
        if (b.discipline.kind == QueueDisciplineKind::CoDel &&
            b.discipline.target_us >= b.discipline.interval_us) {
            add(out, where, "CoDel target must be < interval");
        }
    }

    // QRRs: one per queue, burst must admit a full MTU unless the queue is blocked.
    std::set<QueueId> qrr_queues;
    for (const auto& r : rules.qrrs) {
        const std::string where = "qrr queue " + std::to_string(r.queue);
        if (!qrr_queues.insert(r.queue).second) add(out, where, "more than one QRR for queue");
        if (!queue_exists(r.queue)) add(out, where, "references queue with no BAR");
        if (r.rate_bps > 0 && r.burst_bytes < 1500) {
            add(out, where, "burst_bytes below one MTU");
        }
    }

    if (rules.psr.policy == PsrPolicy::StrictPriority) {
        for (QueueId q : queues) {
            if (!rules.psr.priorities.count(q)) {
                add(out, "psr", "strict priority map missing queue " + std::to_string(q));
            }
        }
    }

    if (rules.trr.mode == TrrMode::FixedRate && rules.trr.rate_bps == 0) {
        add(out, "trr", "fixed-rate pacer needs rate_bps > 0");
    }

    std::set<DrbId> dsr_ids;
    for (const auto& d : rules.dsrs) {
        const std::string where = "dsr drb " + std::to_string(d.drb_id);
        if (!dsr_ids.insert(d.drb_id).second) add(out, where, "duplicate DSR for DRB");
        if (d.weight < 1) add(out, where, "weight must be >= 1");
    }

    if (rules.usr) {
        if (rules.usr->max_rate_bps == 0) add(out, "usr", "max_rate_bps must be > 0");
        if (rules.usr->deadline_us && *rules.usr->deadline_us <= 0) {
            add(out, "usr", "deadline_us must be > 0");
        }
        // Keep shaped egress within the UE's maximum scheduling rate.
        std::uint64_t qrr_sum = 0;
        for (const auto& r : rules.qrrs) qrr_sum += r.rate_bps;
        if (!rules.qrrs.empty() && qrr_sum > rules.usr->max_rate_bps) {
            add(out, "usr",
                "sum of QRR rates (" + std::to_string(qrr_sum) +
                    " bps) exceeds USR max scheduling rate");
        }
    }

    return out;
}

}  // namespace iup
