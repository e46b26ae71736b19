#include "iup/mac/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace iup {

void RlcQueue::push(PacketRecord packet, TimeUs now) {
    packet.stamp("rlc", now);
    bytes_buffered_ += packet.size_bytes;
    buffered_.push_back({std::move(packet), now});
}

std::vector<PacketRecord> RlcQueue::drain(std::uint64_t allocated_bits, TimeUs now) {
    std::vector<PacketRecord> transmitted;
    std::uint64_t pool = credit_bits_ + allocated_bits;
    while (!buffered_.empty()) {
        const std::uint64_t head_bits = buffered_.front().packet.size_bits();
        if (pool < head_bits) break;
        pool -= head_bits;
        Entry e = std::move(buffered_.front());
        buffered_.pop_front();
        bytes_buffered_ -= e.packet.size_bytes;
        e.packet.stamp("mac_tx", now);
        transmitted.push_back(std::move(e.packet));
    }
    // Remaining pool is less than the head's bits by construction; an empty
    // queue resets the carryover.
    credit_bits_ = buffered_.empty() ? 0 : pool;
    return transmitted;
}

std::vector<PacketRecord> RlcQueue::flush() {
    std::vector<PacketRecord> out;
    out.reserve(buffered_.size());
    for (auto& e : buffered_) out.push_back(std::move(e.packet));
    buffered_.clear();
    bytes_buffered_ = 0;
    credit_bits_ = 0;
    return out;
}

SlotDirection slot_direction(std::int64_t slot_index, const CellConfig& cell) {
    if (slot_index < 0) throw std::invalid_argument("negative slot index");
    const auto period = cell.tdd_period_slots();
    return (slot_index % period) < cell.tdd_dl_slots ? SlotDirection::DL
                                                     : SlotDirection::UL;
}

RbBudget rb_budget(const CellConfig& cell) {
    RbBudget b;
    b.prbs_per_dl_slot = cell.prb_count;
    b.bits_per_rb = cell.bits_per_rb_per_slot;
    const double slots_per_second = double(cell.scs_khz) * 1000.0 / 15.0;
    b.dl_slots_per_second =
        slots_per_second * double(cell.tdd_dl_slots) / double(cell.tdd_period_slots());
    b.cell_capacity_bps = b.dl_slots_per_second * double(cell.prb_count) *
                          double(cell.bits_per_rb_per_slot);
    return b;
}

UsageStats usage_stats(std::span<const AllocationMap> allocations, TimeUs window_start,
                       TimeUs window_end) {
    if (allocations.empty()) throw std::invalid_argument("usage_stats: empty window");
    UsageStats s;
    s.window_start = window_start;
    s.window_end = window_end;
    for (const auto& a : allocations) {
        for (const auto& [ue, rbs] : a.rbs_per_ue) s.rbs_per_ue[ue] += rbs;
        s.unused_rbs += a.unused_rbs;
        for (const auto& [drb, bytes] : a.rlc_bytes) {
            s.rlc_bytes_samples[drb].push_back(bytes);
        }
    }
    return s;
}

namespace {

// Largest-remainder integerization of exact RB shares; ties broken by the
// lowest index. Shares must sum to <= total + epsilon.
std::vector<std::uint32_t> largest_remainder(const std::vector<double>& exact,
                                             std::uint32_t total) {
    const std::size_t n = exact.size();
    std::vector<std::uint32_t> alloc(n, 0);
    std::vector<double> remainder(n, 0.0);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fl = std::floor(exact[i] + 1e-9);
        alloc[i] = static_cast<std::uint32_t>(fl);
        remainder[i] = exact[i] - fl;
        assigned += alloc[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];
    });
    std::size_t k = 0;
    while (assigned < total && !order.empty()) {
        ++alloc[order[k]];
        ++assigned;
        k = (k + 1) % order.size();
    }
    return alloc;
}

std::uint32_t demand_rbs(std::uint64_t demand_bits, std::uint32_t bits_per_rb) {
    return static_cast<std::uint32_t>((demand_bits + bits_per_rb - 1) / bits_per_rb);
}

}  // namespace

MacScheduler::MacScheduler(const CellConfig& cell) : cell_(cell), budget_(rb_budget(cell)) {}

std::uint64_t MacScheduler::quantum_bits(std::uint64_t rate_bps) const {
    // Bits per DL slot that average to rate_bps over the TDD pattern.
    return rate_bps * cell_.tdd_period_slots() * std::uint64_t(cell_.slot_duration_us()) /
           (std::uint64_t(cell_.tdd_dl_slots) * 1'000'000);
}

AllocationMap MacScheduler::allocate_slot(SchedulingMode mode,
                                          std::vector<UeSlotView>& ues,
                                          std::int64_t slot_index) {
    if (slot_direction(slot_index, cell_) != SlotDirection::DL) {
        throw std::logic_error("allocate_slot on an uplink slot");
    }
    AllocationMap out;
    out.slot_index = slot_index;
    const std::uint32_t bits_per_rb = budget_.bits_per_rb;
    const std::uint32_t total_rbs = budget_.prbs_per_dl_slot;

    std::sort(ues.begin(), ues.end(),
              [](const UeSlotView& a, const UeSlotView& b) { return a.ue_id < b.ue_id; });

    struct Work {
        std::size_t idx;
        std::uint64_t demand_bits = 0;
        std::uint32_t max_rbs = 0;   // demand- and allowance-capped
        double weight = 0.0;
        TimeUs deadline = kNever;
    };
    std::vector<Work> work;

    for (std::size_t i = 0; i < ues.size(); ++i) {
        auto& ue = ues[i];
        out.rbs_per_ue[ue.ue_id] = 0;
        std::uint64_t demand = 0;
        TimeUs deadline = kNever;
        for (const RlcQueue* rlc : ue.rlcs) {
            out.rlc_bytes[rlc->drb_id()] += rlc->bytes_buffered();
            demand += rlc->demand_bits();
            if (!rlc->empty() && ue.usr && ue.usr->deadline_us) {
                deadline = std::min(deadline, rlc->head_arrival() + *ue.usr->deadline_us);
            }
        }
        // Proportional mode accrues a spending allowance so long-run
        // throughput tracks the USR rate despite RB rounding.
        if (mode == SchedulingMode::Proportional && ue.usr) {
            const auto quantum = std::int64_t(quantum_bits(ue.usr->max_rate_bps));
            auto& allowance = allowance_bits_[ue.ue_id];
            allowance = std::min(allowance + quantum,
                                 quantum + std::int64_t(budget_.bits_per_slot()));
        }
        if (demand == 0) continue;

        Work w;
        w.idx = i;
        w.demand_bits = demand;
        w.deadline = deadline;
        std::uint32_t cap = demand_rbs(demand, bits_per_rb);
        if (mode == SchedulingMode::Proportional && ue.usr) {
            const auto allowance = allowance_bits_[ue.ue_id];
            cap = std::min(cap, allowance <= 0
                                    ? 0u
                                    : std::uint32_t(allowance / bits_per_rb));
        }
        if (mode == SchedulingMode::Edf && ue.usr) {
            cap = std::min(cap,
                           std::uint32_t(quantum_bits(ue.usr->max_rate_bps) / bits_per_rb));
        }
        w.max_rbs = cap;
        const double demand_rate = double(demand) * budget_.dl_slots_per_second;
        switch (mode) {
            case SchedulingMode::FairShare:
                w.weight = 1.0;
                break;
            case SchedulingMode::Proportional:
                w.weight = ue.usr ? std::min(double(ue.usr->max_rate_bps), demand_rate)
                                  : demand_rate;
                break;
            case SchedulingMode::Edf:
                break;
        }
        work.push_back(w);
    }

    std::vector<std::uint32_t> granted(work.size(), 0);
    std::uint32_t used = 0;

    if (mode == SchedulingMode::Edf) {
        // Earliest head-of-line deadline first; each UE hard-capped at its
        // per-slot USR quantum.
        std::vector<std::size_t> order(work.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return work[a].deadline < work[b].deadline;
        });
        for (std::size_t k : order) {
            const std::uint32_t give = std::min(work[k].max_rbs, total_rbs - used);
            granted[k] = give;
            used += give;
            if (used == total_rbs) break;
        }
    } else if (!work.empty()) {
        double weight_sum = 0.0;
        for (const auto& w : work) weight_sum += w.weight;
        std::vector<double> exact(work.size(), 0.0);
        for (std::size_t k = 0; k < work.size(); ++k) {
            exact[k] = weight_sum > 0.0 ? double(total_rbs) * work[k].weight / weight_sum
                                        : 0.0;
        }
        granted = largest_remainder(exact, total_rbs);
        for (std::size_t k = 0; k < work.size(); ++k) {
            granted[k] = std::min(granted[k], work[k].max_rbs);
            used += granted[k];
        }
        // Redistribute what the caps released while anyone can still take.
        bool progress = true;
        while (used < total_rbs && progress) {
            progress = false;
            for (std::size_t k = 0; k < work.size() && used < total_rbs; ++k) {
                if (granted[k] < work[k].max_rbs) {
                    ++granted[k];
                    ++used;
                    progress = true;
                }
            }
        }
    }

    out.unused_rbs = total_rbs - used;

    for (std::size_t k = 0; k < work.size(); ++k) {
        auto& ue = ues[work[k].idx];
        out.rbs_per_ue[ue.ue_id] = granted[k];
        std::uint64_t bits = std::uint64_t(granted[k]) * bits_per_rb;
        if (mode == SchedulingMode::Proportional && ue.usr) {
            allowance_bits_[ue.ue_id] -= std::int64_t(bits);
        }
        if (bits == 0 || ue.rlcs.empty()) continue;

        // Split the UE's bits across its DRBs by DSR weight, capped by each
        // DRB's demand, leftover passed along.
        auto weight_of = [&](DrbId d) -> std::uint32_t {
            for (const auto& dsr : ue.dsrs) {
                if (dsr.drb_id == d) return std::max(1u, dsr.weight);
            }
            return 1;
        };
        std::vector<RlcQueue*> rlcs = ue.rlcs;
        std::sort(rlcs.begin(), rlcs.end(), [](const RlcQueue* a, const RlcQueue* b) {
            return a->drb_id() < b->drb_id();
        });
        std::uint64_t weight_total = 0;
        for (auto* r : rlcs) weight_total += weight_of(r->drb_id());
        std::uint64_t remaining = bits;
        for (std::size_t j = 0; j < rlcs.size(); ++j) {
            RlcQueue* r = rlcs[j];
            std::uint64_t share =
                (j + 1 == rlcs.size())
                    ? remaining
                    : bits * weight_of(r->drb_id()) / weight_total;
            share = std::min({share, remaining, r->demand_bits()});
            out.bits_per_drb[r->drb_id()] += share;
            remaining -= share;
        }
        // Second pass hands rounding leftovers to DRBs that still want bits.
        for (auto* r : rlcs) {
            if (remaining == 0) break;
            const std::uint64_t have = out.bits_per_drb[r->drb_id()];
            const std::uint64_t want = r->demand_bits();
            if (want > have) {
                const std::uint64_t extra = std::min(remaining, want - have);
                out.bits_per_drb[r->drb_id()] += extra;
                remaining -= extra;
            }
        }
    }

    return out;
}

}  // namespace iup
