#ifndef IUP_MAC_SCHEDULER_HPP
#define IUP_MAC_SCHEDULER_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <vector>

#include "iup/core/rules.hpp"
#include "iup/core/types.hpp"

namespace iup {

// Per-DRB downlink buffer between the IDFC egress and MAC transmission.
class RlcQueue {
  public:
    RlcQueue() = default;
    explicit RlcQueue(DrbId id) : drb_id_(id) {}

    DrbId drb_id() const { return drb_id_; }
    void push(PacketRecord packet, TimeUs now);

    bool empty() const { return buffered_.empty(); }
    std::size_t size() const { return buffered_.size(); }
    std::uint64_t bytes_buffered() const { return bytes_buffered_; }
    std::uint64_t credit_bits() const { return credit_bits_; }
    TimeUs head_arrival() const { return buffered_.empty() ? kNever : buffered_.front().arrival; }

    // Bits still needed to transmit everything buffered.
    std::uint64_t demand_bits() const {
        const std::uint64_t total = bytes_buffered_ * 8;
        return total > credit_bits_ ? total - credit_bits_ : 0;
    }

    // Transmits whole head packets while carried credit plus the new
    // allocation suffices; the remainder is carried as credit (never more
    // than the next packet needs; zero when the queue drains).
    std::vector<PacketRecord> drain(std::uint64_t allocated_bits, TimeUs now);

    std::vector<PacketRecord> flush();

    template <typename Fn>
    void for_each_buffered(Fn&& fn) const {
        for (const auto& e : buffered_) fn(e.packet);
    }

  private:
    struct Entry {
        PacketRecord packet;
        TimeUs arrival;
    };
    DrbId drb_id_ = 0;
    std::deque<Entry> buffered_;
    std::uint64_t bytes_buffered_ = 0;
    std::uint64_t credit_bits_ = 0;
};

enum class SlotDirection { DL, UL };

// TDD pattern: the first tdd_dl_slots of each period are downlink.
SlotDirection slot_direction(std::int64_t slot_index, const CellConfig& cell);

struct RbBudget {
    std::uint32_t prbs_per_dl_slot = 0;
    std::uint32_t bits_per_rb = 0;
    double dl_slots_per_second = 0.0;
    double cell_capacity_bps = 0.0;

    std::uint64_t bits_per_slot() const {
        return std::uint64_t(prbs_per_dl_slot) * bits_per_rb;
    }
};

RbBudget rb_budget(const CellConfig& cell);

enum class SchedulingMode { FairShare, Proportional, Edf };

struct AllocationMap {
    std::int64_t slot_index = 0;
    std::map<UeId, std::uint32_t> rbs_per_ue;
    std::map<DrbId, std::uint64_t> bits_per_drb;
    std::map<DrbId, std::uint64_t> rlc_bytes;  // occupancy sampled at slot start
    std::uint32_t unused_rbs = 0;
};

struct UsageStats {
    TimeUs window_start = 0;
    TimeUs window_end = 0;
    std::map<UeId, std::uint64_t> rbs_per_ue;
    std::uint64_t unused_rbs = 0;
    std::map<DrbId, std::vector<std::uint64_t>> rlc_bytes_samples;
};

UsageStats usage_stats(std::span<const AllocationMap> allocations, TimeUs window_start,
                       TimeUs window_end);

// One UE's scheduling inputs for a slot.
struct UeSlotView {
    UeId ue_id = 0;
    const USR* usr = nullptr;           // null = no UE scheduling rule
    std::vector<RlcQueue*> rlcs;
    std::vector<DSR> dsrs;              // weights; missing DRBs default to 1
};

// Slot-based downlink radio-resource scheduler.
//
// FairShare: backlogged UEs split the slot equally (largest remainder,
// lowest-id tie-break), capped by demand, leftovers redistributed.
// Proportional: RBs proportional to min(USR rate, demand rate); a per-UE
// allowance accumulator keeps long-run throughput at or below the USR rate
// while letting largest-remainder rounding average out.
// EDF: UEs served in earliest-head-deadline order, each hard-capped at its
// per-slot USR quantum (floor, no carryover) — leftover RBs stay unused.
class MacScheduler {
  public:
    explicit MacScheduler(const CellConfig& cell);

    const RbBudget& budget() const { return budget_; }

    AllocationMap allocate_slot(SchedulingMode mode, std::vector<UeSlotView>& ues,
                                std::int64_t slot_index);

  private:
    std::uint64_t quantum_bits(std::uint64_t rate_bps) const;

    CellConfig cell_;
    RbBudget budget_;
    std::map<UeId, std::int64_t> allowance_bits_;
};

}  // namespace iup

#endif
