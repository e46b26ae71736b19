#include "iup/pipeline/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace iup {

std::optional<QueueId> classify(const PacketRecord& packet, const std::vector<PDR>& pdrs) {
    const PDR* best = nullptr;
    const PDR* fallback = nullptr;
    for (const auto& p : pdrs) {
        if (p.is_default) {
            if (!fallback || p.pdr_id < fallback->pdr_id) fallback = &p;
            continue;
        }
        if (!matches(p.match, packet)) continue;
        if (!best || p.precedence < best->precedence ||
            (p.precedence == best->precedence && p.pdr_id < best->pdr_id)) {
            best = &p;
        }
    }
    if (best) return best->target_queue;
    if (fallback) return fallback->target_queue;
    return std::nullopt;
}

ForwardAction police(const PacketRecord&, const FAR* far) {
    return far ? far->action : ForwardAction::Forward;
}

QueueSelection select_queue(const PSR& psr, const std::vector<QueueId>& eligible,
                            QueueId cursor, const std::vector<QueueId>& configured) {
    if (eligible.empty()) {
        throw std::invalid_argument("select_queue: empty eligible set");
    }
    if (psr.policy == PsrPolicy::StrictPriority) {
        QueueId best = eligible.front();
        std::int32_t best_prio = psr.priorities.at(best);
        for (QueueId q : eligible) {
            const std::int32_t prio = psr.priorities.at(q);
            if (prio < best_prio || (prio == best_prio && q < best)) {
                best = q;
                best_prio = prio;
            }
        }
        return {best, cursor};
    }

    // Round robin: first eligible queue at/after the cursor, wrapping.
    auto it = std::lower_bound(eligible.begin(), eligible.end(), cursor);
    const QueueId chosen = (it != eligible.end()) ? *it : eligible.front();

    auto next = std::upper_bound(configured.begin(), configured.end(), chosen);
    const QueueId new_cursor = (next != configured.end()) ? *next : configured.front();
    return {chosen, new_cursor};
}

TimeUs pace_release(const TRR& trr, std::uint32_t size_bytes, DrbId drb, const USR* usr,
                    TimeUs now, std::map<DrbId, TimeUs>& next_release) {
    std::uint64_t rate = 0;
    switch (trr.mode) {
        case TrrMode::None:
            return now;
        case TrrMode::FixedRate:
            rate = trr.rate_bps;
            break;
        case TrrMode::BdpPacer:
            if (!usr) return now;  // no scheduling rate to pace against
            rate = usr->max_rate_bps;
            break;
    }
    if (rate == 0) return now;
    TimeUs& next = next_release[drb];
    const TimeUs release = std::max(now, next);
    const std::uint64_t gap =
        (std::uint64_t(size_bytes) * 8'000'000 + rate - 1) / rate;
    next = release + static_cast<TimeUs>(gap);
    return release;
}

DrbId DrbMapper::map_flow_to_drb(const SessionRecord& session, QueueId queue,
                                 DrbMappingPolicy policy) {
    if (session.state == SessionState::Releasing) {
        throw std::logic_error("map_flow_to_drb on releasing session");
    }
    if (policy == DrbMappingPolicy::Explicit) {
        auto it = session.drb_map.find(queue);
        if (it != session.drb_map.end()) return it->second;
    }
    const BAR* bar = session.rules.bar_for(queue);
    GroupKey key{bar ? bar->discipline.kind : QueueDisciplineKind::Fifo, 0};
    if (session.rules.psr.policy == PsrPolicy::StrictPriority) {
        auto it = session.rules.psr.priorities.find(queue);
        if (it != session.rules.psr.priorities.end()) key.priority_class = it->second;
    }
    auto [it, inserted] = groups_.try_emplace(key, 0);
    if (inserted) {
        // New group gets a fresh DRB above any explicitly assigned one.
        DrbId base = next_drb_;
        for (const auto& [q, d] : session.drb_map) base = std::max(base, d);
        for (const auto& [k, d] : groups_) base = std::max(base, d);
        it->second = base + 1;
        next_drb_ = it->second;
    }
    return it->second;
}

Pipeline::Pipeline(const SessionRecord& session, TimeUs now)
    : session_(session), rules_(session.rules) {
    reconcile_queues(now);
    const auto ids = rules_.queue_ids();
    rr_cursor_ = ids.empty() ? 0 : ids.front();
}

void Pipeline::reconcile_queues(TimeUs now) {
    for (const auto& bar : rules_.bars) {
        std::optional<QRR> shaper;
        if (const QRR* q = rules_.qrr_for(bar.queue)) shaper = *q;
        auto it = queues_.find(bar.queue);
        if (it == queues_.end()) {
            queues_.emplace(bar.queue, TmQueue(bar.queue, bar.discipline, shaper, now));
        } else {
            it->second.set_discipline(bar.discipline);
            it->second.set_shaper(shaper, now);
        }
    }
}

IngressResult Pipeline::ingress(PacketRecord packet, TimeUs now) {
    packet.stamp("ingress", now);
    const auto target = classify(packet, rules_.pdrs);
    if (!target) {
        return {IngressDisposition::NoPdrDiscard, 0};
    }
    if (police(packet, rules_.far_for(*target)) == ForwardAction::Drop) {
        return {IngressDisposition::PolicerDropped, *target};
    }
    auto it = queues_.find(*target);
    if (it == queues_.end()) {
        // Validation prevents dangling PDR targets; treat as discard.
        return {IngressDisposition::NoPdrDiscard, *target};
    }
    const QueueId q = *target;
    if (it->second.enqueue(std::move(packet), now) == EnqueueResult::TailDropped) {
        return {IngressDisposition::TailDropped, q};
    }
    return {IngressDisposition::Queued, q};
}

DrbId Pipeline::drb_for_queue(QueueId q) {
    return drb_mapper_.map_flow_to_drb(session_, q, DrbMappingPolicy::Explicit);
}

Pipeline::Egress Pipeline::egress_step(TimeUs now) {
    Egress out;
    if (held_until_ > now) {
        out.kind = Egress::Kind::Wait;
        out.at = held_until_;
        return out;
    }

    const auto configured = rules_.queue_ids();
    while (true) {
        std::vector<QueueId> eligible;
        TimeUs earliest = kNever;
        bool any_backlog = false;
        for (auto& [id, q] : queues_) {
            if (q.empty()) continue;
            any_backlog = true;
            const TimeUs t = q.shaper_release_time(now);
            if (t <= now) {
                eligible.push_back(id);
            } else if (t != kNever) {
                earliest = std::min(earliest, t);
            }
        }
        if (!any_backlog) {
            out.kind = Egress::Kind::Idle;
            return out;
        }
        if (eligible.empty()) {
            if (earliest == kNever) {
                out.kind = Egress::Kind::Idle;  // every backlogged queue is blocked
            } else {
                out.kind = Egress::Kind::Wait;
                out.at = earliest;
            }
            return out;
        }

        const auto sel = select_queue(rules_.psr, eligible, rr_cursor_, configured);
        rr_cursor_ = sel.next_cursor;
        TmQueue& q = queues_.at(sel.queue);
        DequeueResult dr = q.dequeue(now);
        for (auto& d : dr.codel_drops) out.codel_drops.push_back(std::move(d));
        if (!dr.delivered) {
            continue;  // CoDel consumed the backlog; re-evaluate
        }
        q.consume_tokens(dr.delivered->size_bytes);

        const DrbId drb = drb_for_queue(sel.queue);
        const USR* usr = rules_.usr ? &*rules_.usr : nullptr;
        const TimeUs release = pace_release(rules_.trr, dr.delivered->size_bytes, drb,
                                            usr, now, pacer_next_release_);
        if (release > now) held_until_ = release;
        out.kind = Egress::Kind::Deliver;
        out.packet = std::move(dr.delivered);
        out.drb = drb;
        out.at = release;
        return out;
    }
}

void Pipeline::apply_rules(const RuleSet& rules, TimeUs now) {
    rules_ = rules;
    session_.rules = rules;
    ++rule_version_;
    reconcile_queues(now);
    const auto ids = rules_.queue_ids();
    if (!ids.empty() && !std::binary_search(ids.begin(), ids.end(), rr_cursor_)) {
        rr_cursor_ = ids.front();
    }
}

std::vector<PacketRecord> Pipeline::flush_all() {
    std::vector<PacketRecord> out;
    for (auto& [id, q] : queues_) {
        auto f = q.flush();
        out.insert(out.end(), std::make_move_iterator(f.begin()),
                   std::make_move_iterator(f.end()));
    }
    return out;
}

TmQueue* Pipeline::queue(QueueId id) {
    auto it = queues_.find(id);
    return it == queues_.end() ? nullptr : &it->second;
}

std::size_t Pipeline::buffered_packets() const {
    std::size_t n = 0;
    for (const auto& [id, q] : queues_) n += q.size();
    return n;
}

}  // namespace iup
