#include "iup/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iup/sim/metrics.hpp"

namespace iup {

const char* to_string(DropCause c) {
    switch (c) {
        case DropCause::Classifier: return "classifier";
        case DropCause::Policer: return "policer";
        case DropCause::QueueTail: return "queue_tail";
        case DropCause::CoDel: return "codel";
    }
    return "unknown";
}

double percentile(std::vector<float>& samples, double q) {
    if (samples.empty()) return 0.0;
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * double(n)));
    if (rank == 0) rank = 1;
    if (rank > n) rank = n;
    return samples[rank - 1];
}

std::vector<std::string> validate_scenario(const ScenarioSpec& spec) {
    std::vector<std::string> problems;
    if (spec.schema != 1) problems.push_back("unsupported schema version");
    if (spec.duration_us <= 0) problems.push_back("duration must be > 0");
    if (spec.measure_window_us <= 0) problems.push_back("measure window must be > 0");

    std::set<SessionId> session_ids;
    for (const auto& s : spec.sessions) {
        if (!session_ids.insert(s.session_id).second) {
            problems.push_back("duplicate session id " + std::to_string(s.session_id));
        }
        for (const auto& v : validate_rule_set(s.rules)) {
            problems.push_back("session " + std::to_string(s.session_id) + ": " + v.where +
                               ": " + v.reason);
        }
    }
    std::set<FlowId> flow_ids;
    for (const auto& src : spec.sources) {
        if (!session_ids.count(src.session_id)) {
            problems.push_back("source flow " + std::to_string(src.flow_id) +
                               " references unknown session " +
                               std::to_string(src.session_id));
        }
        if (!flow_ids.insert(src.flow_id).second) {
            problems.push_back("duplicate flow id " + std::to_string(src.flow_id));
        }
        if (src.kind == SourceKind::Cbr && src.cbr_rate_bps == 0) {
            problems.push_back("cbr flow " + std::to_string(src.flow_id) + " needs a rate");
        }
    }
    TimeUs prev = 0;
    for (const auto& u : spec.updates) {
        if (u.apply_at_us < prev) {
            problems.push_back("updates not sorted by apply_at_us");
            break;
        }
        prev = u.apply_at_us;
    }
    for (const auto& u : spec.updates) {
        if (u.apply_at_us < 0) problems.push_back("update apply_at_us must be >= 0");
        if (!session_ids.count(u.session_id)) {
            problems.push_back("update references unknown session " +
                               std::to_string(u.session_id));
        }
        if (auto err = authority_violation(u.deltas, u.origin)) {
            problems.push_back("update at " + std::to_string(u.apply_at_us) + "us: " + *err);
        }
    }
    return problems;
}

Simulation::Simulation(ScenarioSpec spec) : spec_(std::move(spec)), rng_(spec_.seed) {
    const auto problems = validate_scenario(spec_);
    if (!problems.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& p : problems) msg += " [" + p + "]";
        throw std::invalid_argument(msg);
    }
    slot_us_ = spec_.cell.slot_duration_us();
    mac_ = std::make_unique<MacScheduler>(spec_.cell);
    build();
}

void Simulation::build() {
    for (const auto& cfg : spec_.sessions) {
        SessionRecord& rec = table_.establish(cfg);
        SessionState ss;
        ss.sid = cfg.session_id;
        ss.pipeline = std::make_unique<Pipeline>(rec, 0);
        ss.ue_id = rec.ue_id;
        for (const auto& [queue, drb] : cfg.drb_map) {
            if (!ss.rlcs.count(drb)) {
                const DrbId gid = (DrbId(cfg.session_id) << 8) | drb;
                ss.rlcs.emplace(drb, RlcQueue(gid));
            }
        }
        states_.emplace(cfg.session_id, std::move(ss));
    }
    flows_.reserve(spec_.sources.size());
    for (const auto& src : spec_.sources) {
        FlowState f;
        f.cfg = src;
        const SessionRecord* rec = table_.find(src.session_id);
        f.cfg.flow.dst_ip = rec->allocated_ip;
        f.window.cwnd_bytes = src.aimd.initial_cwnd_bytes;
        f.window.max_cwnd_bytes = src.aimd.max_cwnd_bytes;
        f.window.mss_bytes = src.aimd.mss_bytes;
        flows_.push_back(std::move(f));
    }

    // Phase boundaries: start, every distinct update time, end.
    phase_bounds_.push_back(0);
    for (const auto& u : spec_.updates) {
        if (u.apply_at_us > 0 && u.apply_at_us < spec_.duration_us &&
            (phase_bounds_.empty() || phase_bounds_.back() != u.apply_at_us)) {
            phase_bounds_.push_back(u.apply_at_us);
        }
    }
    phase_bounds_.push_back(spec_.duration_us);
}

Simulation::FlowState* Simulation::flow_by_id(FlowId id) {
    for (auto& f : flows_) {
        if (f.cfg.flow_id == id) return &f;
    }
    return nullptr;
}

Pipeline* Simulation::pipeline(SessionId id) {
    auto it = states_.find(id);
    return it == states_.end() ? nullptr : it->second.pipeline.get();
}

void Simulation::start_sources() {
    for (std::size_t i = 0; i < flows_.size(); ++i) {
        auto& f = flows_[i];
        // Small deterministic start offset de-phase-locks the sources.
        const TimeUs start = f.cfg.start_us + TimeUs(rng_() % 10'000);
        if (f.cfg.kind == SourceKind::Aimd) {
            engine_.schedule(start, EventKind::SourceTick, [this, i] { try_emit(flows_[i]); });
        } else {
            const TimeUs interval = f.cfg.cbr_interval_us();
            auto emit_fn = std::make_shared<std::function<void()>>();
            *emit_fn = [this, i, interval, emit_fn] {
                emit_packet(flows_[i]);
                const TimeUs next = engine_.now() + interval;
                if (next <= spec_.duration_us) {
                    engine_.schedule(next, EventKind::SourceTick, *emit_fn);
                }
            };
            engine_.schedule(start, EventKind::SourceTick, *emit_fn);
        }
    }
}

void Simulation::emit_packet(FlowState& f) {
    PacketRecord pkt;
    pkt.packet_id = ++packet_counter_;
    pkt.flow = f.cfg.flow;
    pkt.dscp = f.cfg.dscp;
    pkt.size_bytes = f.cfg.kind == SourceKind::Aimd ? f.cfg.aimd.wire_bytes
                                                    : f.cfg.cbr_packet_bytes;
    pkt.created_at = engine_.now();
    pkt.flow_id = f.cfg.flow_id;
    pkt.flow_seq = f.next_seq++;
    pkt.stamp("created", engine_.now());
    ++f.emitted;
    ++f.in_transit;
    const std::size_t flow_idx = std::size_t(&f - flows_.data());
    engine_.schedule(engine_.now() + spec_.path.downlink_oneway_us, EventKind::Arrival,
                     [this, flow_idx, p = std::move(pkt)]() mutable {
                         on_arrival(flows_[flow_idx], std::move(p));
                     });
}

void Simulation::try_emit(FlowState& f) {
    if (f.cfg.kind != SourceKind::Aimd) return;
    const auto mss = std::int64_t(f.cfg.aimd.mss_bytes);
    while (f.inflight_payload + mss <= std::int64_t(f.window.cwnd_bytes)) {
        f.outstanding.insert(f.next_seq);
        f.inflight_payload += mss;
        emit_packet(f);
    }
}

void Simulation::on_arrival(FlowState& f, PacketRecord pkt) {
    --f.in_transit;
    auto it = states_.find(f.cfg.session_id);
    if (it == states_.end()) {
        record_drop(f, DropCause::Classifier);  // session gone (released)
        return;
    }
    auto result = it->second.pipeline->ingress(std::move(pkt), engine_.now());
    switch (result.disposition) {
        case IngressDisposition::Queued:
            service_pipeline(f.cfg.session_id);
            break;
        case IngressDisposition::NoPdrDiscard:
            record_drop(f, DropCause::Classifier);
            break;
        case IngressDisposition::PolicerDropped:
            record_drop(f, DropCause::Policer);
            break;
        case IngressDisposition::TailDropped:
            record_drop(f, DropCause::QueueTail);
            break;
    }
}

void Simulation::record_drop(FlowState& f, DropCause cause) {
    switch (cause) {
        case DropCause::Classifier: ++f.drops.classifier; break;
        case DropCause::Policer: ++f.drops.policer; break;
        case DropCause::QueueTail: ++f.drops.queue_tail; break;
        case DropCause::CoDel: ++f.drops.codel; break;
    }
}

void Simulation::record_codel_drops(std::vector<PacketRecord>& drops) {
    for (auto& d : drops) {
        if (FlowState* f = flow_by_id(d.flow_id)) record_drop(*f, DropCause::CoDel);
    }
    drops.clear();
}

void Simulation::schedule_service(SessionId sid, TimeUs at) {
    auto& ss = states_.at(sid);
    if (ss.next_service_wake != kNever && ss.next_service_wake <= at) return;
    ss.next_service_wake = at;
    engine_.schedule(at, EventKind::ShaperRelease, [this, sid, at] {
        auto it = states_.find(sid);
        if (it == states_.end()) return;
        if (it->second.next_service_wake == at) it->second.next_service_wake = kNever;
        service_pipeline(sid);
    });
}

void Simulation::service_pipeline(SessionId sid) {
    auto it = states_.find(sid);
    if (it == states_.end()) return;
    auto& ss = it->second;
    while (true) {
        auto out = ss.pipeline->egress_step(engine_.now());
        record_codel_drops(out.codel_drops);
        if (out.kind == Pipeline::Egress::Kind::Idle) return;
        if (out.kind == Pipeline::Egress::Kind::Wait) {
            schedule_service(sid, out.at);
            return;
        }
        // Deliver
        if (out.at > engine_.now()) {
            // Pacer gate: packet departs the egress pipe at out.at.
            if (FlowState* f = flow_by_id(out.packet->flow_id)) ++f->in_transit;
            engine_.schedule(out.at, EventKind::PacerRelease,
                             [this, sid, drb = out.drb, p = std::move(*out.packet)]() mutable {
                                 auto sit = states_.find(sid);
                                 if (sit == states_.end()) return;
                                 if (FlowState* f = flow_by_id(p.flow_id)) --f->in_transit;
                                 rlc_push(sit->second, drb, std::move(p));
                                 service_pipeline(sid);
                             });
            return;
        }
        rlc_push(ss, out.drb, std::move(*out.packet));
    }
}

void Simulation::rlc_push(SessionState& ss, DrbId drb, PacketRecord pkt) {
    auto it = ss.rlcs.find(drb);
    if (it == ss.rlcs.end()) {
        const DrbId gid = (DrbId(ss.sid) << 8) | drb;
        it = ss.rlcs.emplace(drb, RlcQueue(gid)).first;
    }
    it->second.push(std::move(pkt), engine_.now());
}

SchedulingMode Simulation::current_mode() const {
    bool any_usr = false;
    bool any_deadline = false;
    for (const auto& [sid, ss] : states_) {
        const auto& usr = ss.pipeline->rules().usr;
        if (usr) {
            any_usr = true;
            if (usr->deadline_us) any_deadline = true;
        }
    }
    if (!any_usr) return SchedulingMode::FairShare;
    return any_deadline ? SchedulingMode::Edf : SchedulingMode::Proportional;
}

void Simulation::on_slot_tick(std::int64_t slot_index) {
    drain_inbox();
    const TimeUs now = engine_.now();
    if (slot_direction(slot_index, spec_.cell) == SlotDirection::DL) {
        // Build per-UE views (sessions of the same UE merge).
        std::map<UeId, UeSlotView> views;
        for (auto& [sid, ss] : states_) {
            auto& v = views[ss.ue_id];
            v.ue_id = ss.ue_id;
            const auto& rules = ss.pipeline->rules();
            if (!v.usr && rules.usr) v.usr = &*rules.usr;
            for (auto& [drb, rlc] : ss.rlcs) v.rlcs.push_back(&rlc);
            for (const auto& d : rules.dsrs) v.dsrs.push_back(d);
        }
        std::vector<UeSlotView> ues;
        ues.reserve(views.size());
        for (auto& [ue, v] : views) ues.push_back(std::move(v));

        AllocationMap alloc = mac_->allocate_slot(current_mode(), ues, slot_index);

        // Phase accumulation (after the settle prefix).
        const TimeUs phase_start = phase_bounds_[current_phase_];
        if (now >= phase_start + spec_.settle_us) {
            ++phase_dl_slots_;
            phase_unused_rbs_ += alloc.unused_rbs;
            for (const auto& [ue, rbs] : alloc.rbs_per_ue) phase_rbs_used_[ue] += rbs;
            std::map<UeId, std::uint64_t> ue_rlc;
            for (const auto& [sid, ss] : states_) {
                std::uint64_t bytes = 0;
                for (const auto& [drb, rlc] : ss.rlcs) bytes += rlc.bytes_buffered();
                ue_rlc[ss.ue_id] += bytes;
            }
            for (const auto& [ue, bytes] : ue_rlc) {
                phase_rlc_byte_sum_[ue] += double(bytes);
                ++phase_rlc_samples_[ue];
            }
        }

        // Drain RLC queues per the allocation; transmitted packets are
        // delivered at the end of the slot.
        const TimeUs slot_end = now + slot_us_;
        for (auto& [sid, ss] : states_) {
            for (auto& [drb, rlc] : ss.rlcs) {
                auto bits_it = alloc.bits_per_drb.find(rlc.drb_id());
                if (bits_it == alloc.bits_per_drb.end() || bits_it->second == 0) continue;
                auto transmitted = rlc.drain(bits_it->second, now);
                for (auto& pkt : transmitted) {
                    FlowState* f = flow_by_id(pkt.flow_id);
                    if (!f) continue;
                    ++f->in_transit;
                    const std::size_t flow_idx = std::size_t(f - flows_.data());
                    const TimeUs created = pkt.created_at;
                    const std::uint64_t bits = pkt.size_bits();
                    const std::uint64_t seq = pkt.flow_seq;
                    engine_.schedule(slot_end, EventKind::AckDelivery,
                                     [this, flow_idx, created, bits, seq] {
                                         auto& fl = flows_[flow_idx];
                                         --fl.in_transit;
                                         ++fl.delivered;
                                         fl.delivered_bits_window += bits;
                                         const TimeUs now2 = engine_.now();
                                         const float lat_ms =
                                             float(double(now2 - created) / 1000.0);
                                         fl.window_latency_ms.push_back(lat_ms);
                                         const TimeUs ph_start =
                                             phase_bounds_[current_phase_];
                                         if (now2 >= ph_start + spec_.settle_us) {
                                             fl.delivered_bits_phase += bits;
                                             ++fl.delivered_phase;
                                             fl.phase_latency_ms.push_back(lat_ms);
                                         }
                                         if (fl.cfg.kind == SourceKind::Aimd) {
                                             engine_.schedule(
                                                 now2 + spec_.path.uplink_oneway_us,
                                                 EventKind::AckDelivery,
                                                 [this, flow_idx, seq] {
                                                     on_ack(flows_[flow_idx], seq);
                                                 });
                                         }
                                     });
                }
            }
        }
        window_allocs_.push_back(std::move(alloc));
    }

    const TimeUs next = now + slot_us_;
    if (next < spec_.duration_us) {
        engine_.schedule(next, EventKind::SlotTick,
                         [this, next_index = slot_index + 1] { on_slot_tick(next_index); });
    }
}

void Simulation::on_ack(FlowState& f, std::uint64_t seq) {
    auto it = f.outstanding.find(seq);
    if (it != f.outstanding.end()) {
        f.outstanding.erase(it);
        f.inflight_payload -= f.cfg.aimd.mss_bytes;
        f.window.on_ack();
    }
    // Delivered past outstanding lower sequences: dup-ack analogue. Arm a
    // one-RTT loss timer for each hole.
    const std::size_t flow_idx = std::size_t(&f - flows_.data());
    for (auto ot = f.outstanding.begin(); ot != f.outstanding.end() && *ot < seq; ++ot) {
        const std::uint64_t missing = *ot;
        if (f.loss_pending.insert(missing).second) {
            engine_.schedule(engine_.now() + f.cfg.aimd.base_rtt_us, EventKind::AckDelivery,
                             [this, flow_idx, missing] {
                                 finalize_loss(flows_[flow_idx], missing);
                             });
        }
    }
    try_emit(f);
}

void Simulation::finalize_loss(FlowState& f, std::uint64_t seq) {
    f.loss_pending.erase(seq);
    if (f.outstanding.erase(seq) == 0) return;  // delivered after all
    f.inflight_payload -= f.cfg.aimd.mss_bytes;
    const TimeUs now = engine_.now();
    if (now >= f.recovery_until) {
        f.window.on_loss();
        f.recovery_until = now + f.cfg.aimd.base_rtt_us;
    }
    try_emit(f);
}

void Simulation::post_update(const ControlUpdate& update) {
    if (auto err = authority_violation(update.deltas, update.origin)) {
        throw SessionError(SessionErrorCode::AuthorityViolation, *err);
    }
    std::lock_guard<std::mutex> lock(inbox_mutex_);
    inbox_.push_back(update);
}

void Simulation::drain_inbox() {
    std::vector<ControlUpdate> posted;
    {
        std::lock_guard<std::mutex> lock(inbox_mutex_);
        posted.swap(inbox_);
    }
    for (auto& u : posted) {
        u.apply_at_us = std::max(u.apply_at_us, engine_.now());
        if (!table_.find(u.session_id)) continue;  // released meanwhile
        engine_.schedule(u.apply_at_us, EventKind::ControlApply,
                         [this, u] { apply_update(u); });
    }
}

void Simulation::submit_update(const ControlUpdate& update) {
    if (auto err = authority_violation(update.deltas, update.origin)) {
        throw SessionError(SessionErrorCode::AuthorityViolation, *err);
    }
    if (update.apply_at_us < engine_.now()) {
        throw SessionError(SessionErrorCode::PastApplyTime,
                           "apply_at_us is in the past");
    }
    if (!table_.find(update.session_id)) {
        throw SessionError(SessionErrorCode::UnknownSession,
                           "unknown session " + std::to_string(update.session_id));
    }
    engine_.schedule(update.apply_at_us, EventKind::ControlApply,
                     [this, update] { apply_update(update); });
}

void Simulation::apply_update(const ControlUpdate& update) {
    SessionRecord& rec = table_.modify(update.session_id, update.deltas);
    auto it = states_.find(update.session_id);
    if (it != states_.end()) {
        it->second.pipeline->apply_rules(rec.rules, engine_.now());
        service_pipeline(update.session_id);
    }
}

Simulation::ReleaseSummary Simulation::release_session(SessionId id) {
    SessionRecord rec = table_.release(id);
    ReleaseSummary summary;
    summary.session_id = id;
    summary.freed_ip = rec.allocated_ip;
    auto it = states_.find(id);
    if (it != states_.end()) {
        auto flushed = it->second.pipeline->flush_all();
        summary.flushed_packets += flushed.size();
        for (auto& [drb, rlc] : it->second.rlcs) {
            summary.flushed_packets += rlc.flush().size();
        }
        states_.erase(it);
    }
    return summary;
}

bool Simulation::audit_conservation() {
    std::map<FlowId, std::uint64_t> physical;
    for (const auto& [sid, ss] : states_) {
        for (const auto& [qid, q] : ss.pipeline->queues()) {
            q.for_each_buffered([&](const PacketRecord& p) { ++physical[p.flow_id]; });
        }
        for (const auto& [drb, rlc] : ss.rlcs) {
            rlc.for_each_buffered([&](const PacketRecord& p) { ++physical[p.flow_id]; });
        }
    }
    bool ok = true;
    for (const auto& f : flows_) {
        const std::uint64_t present = physical.count(f.cfg.flow_id)
                                          ? physical[f.cfg.flow_id]
                                          : 0;
        const std::uint64_t accounted =
            f.delivered + f.drops.total() + present + std::uint64_t(f.in_transit);
        if (accounted != f.emitted) ok = false;
    }
    return ok;
}

void Simulation::on_measure_tick() {
    const TimeUs now = engine_.now();
    const TimeUs window_us = spec_.measure_window_us;

    // Per-UE RB usage and RLC occupancy over the finished window.
    std::map<UeId, std::uint64_t> ue_rbs;
    std::uint64_t unused = 0;
    std::map<UeId, double> ue_rlc_sum;
    std::uint64_t n_allocs = window_allocs_.size();
    for (const auto& a : window_allocs_) {
        for (const auto& [ue, rbs] : a.rbs_per_ue) ue_rbs[ue] += rbs;
        unused += a.unused_rbs;
        std::map<UeId, std::uint64_t> per_ue;
        for (const auto& [gid, bytes] : a.rlc_bytes) {
            const SessionId sid = SessionId(gid >> 8);
            auto it = states_.find(sid);
            if (it != states_.end()) per_ue[it->second.ue_id] += bytes;
        }
        for (const auto& [ue, bytes] : per_ue) ue_rlc_sum[ue] += double(bytes);
    }

    for (auto& f : flows_) {
        const SessionRecord* rec = table_.find(f.cfg.session_id);
        const UeId ue = rec ? rec->ue_id : 0;
        FlowWindowRow row;
        row.t_start = window_start_;
        row.flow_id = f.cfg.flow_id;
        row.ue_id = ue;
        row.throughput_bps = double(f.delivered_bits_window) * 1e6 / double(window_us);
        row.p50_latency_ms = percentile(f.window_latency_ms, 0.50);
        row.p99_latency_ms = percentile(f.window_latency_ms, 0.99);
        row.rbs_used = ue_rbs.count(ue) ? ue_rbs[ue] : 0;
        row.rbs_unused = unused;
        row.rlc_bytes = n_allocs ? ue_rlc_sum[ue] / double(n_allocs) : 0.0;
        report_.windows.push_back(row);
        f.delivered_bits_window = 0;
        f.window_latency_ms.clear();
    }
    window_allocs_.clear();
    window_start_ = now;

    conservation_ok_ = audit_conservation() && conservation_ok_;

    const TimeUs next = now + window_us;
    if (next <= spec_.duration_us) {
        engine_.schedule(next, EventKind::MeasureTick, [this] { on_measure_tick(); });
    }
}

void Simulation::finish_phase(std::size_t phase_idx) {
    PhaseSummary ph;
    ph.start_us = phase_bounds_[phase_idx];
    ph.end_us = phase_bounds_[phase_idx + 1];
    const TimeUs measured_us =
        std::max<TimeUs>(1, ph.end_us - ph.start_us - spec_.settle_us);
    for (auto& f : flows_) {
        const SessionRecord* rec = table_.find(f.cfg.session_id);
        PhaseFlowSummary s;
        s.flow_id = f.cfg.flow_id;
        s.ue_id = rec ? rec->ue_id : 0;
        s.mean_throughput_bps = double(f.delivered_bits_phase) * 1e6 / double(measured_us);
        s.p50_latency_ms = percentile(f.phase_latency_ms, 0.50);
        s.p99_latency_ms = percentile(f.phase_latency_ms, 0.99);
        s.delivered = f.delivered_phase;
        ph.flows.push_back(s);
        f.delivered_bits_phase = 0;
        f.delivered_phase = 0;
        f.phase_latency_ms.clear();
    }
    for (const auto& [ue, rbs] : phase_rbs_used_) {
        PhaseUeSummary u;
        u.ue_id = ue;
        u.rbs_used = rbs;
        u.mean_rlc_bytes = phase_rlc_samples_.count(ue) && phase_rlc_samples_[ue] > 0
                               ? phase_rlc_byte_sum_[ue] / double(phase_rlc_samples_[ue])
                               : 0.0;
        ph.ues.push_back(u);
    }
    ph.unused_rbs = phase_unused_rbs_;
    ph.dl_slots = phase_dl_slots_;
    report_.phases.push_back(std::move(ph));

    phase_rbs_used_.clear();
    phase_unused_rbs_ = 0;
    phase_dl_slots_ = 0;
    phase_rlc_byte_sum_.clear();
    phase_rlc_samples_.clear();
    current_phase_ = phase_idx + 1;
}

RunReport Simulation::run() {
    report_ = RunReport{};
    report_.scenario = spec_.name;
    report_.seed = spec_.seed;
    report_.duration_us = spec_.duration_us;
    report_.settle_us = spec_.settle_us;

    // Phase-finish events first so that, at a shared timestamp, a phase
    // closes before the control update that opens the next one applies.
    for (std::size_t i = 0; i + 1 < phase_bounds_.size(); ++i) {
        engine_.schedule(phase_bounds_[i + 1], EventKind::MeasureTick,
                         [this, i] { finish_phase(i); });
    }
    for (const auto& u : spec_.updates) {
        submit_update(u);
    }
    engine_.schedule(0, EventKind::SlotTick, [this] { on_slot_tick(0); });
    engine_.schedule(spec_.measure_window_us, EventKind::MeasureTick,
                     [this] { on_measure_tick(); });
    start_sources();

    engine_.run_until(spec_.duration_us);

    conservation_ok_ = audit_conservation() && conservation_ok_;
    report_.conservation_ok = conservation_ok_;
    for (const auto& f : flows_) {
        report_.emitted += f.emitted;
        report_.delivered += f.delivered;
        report_.drops.classifier += f.drops.classifier;
        report_.drops.policer += f.drops.policer;
        report_.drops.queue_tail += f.drops.queue_tail;
        report_.drops.codel += f.drops.codel;
    }
    return report_;
}

RunReport run_scenario(const ScenarioSpec& spec) {
    Simulation sim(spec);
    return sim.run();
}

}  // namespace iup
