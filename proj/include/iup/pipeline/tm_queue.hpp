#ifndef IUP_PIPELINE_TM_QUEUE_HPP
#define IUP_PIPELINE_TM_QUEUE_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "iup/core/rules.hpp"
#include "iup/core/types.hpp"

namespace iup {

enum class EnqueueResult { Accepted, TailDropped };

struct DequeueResult {
    std::optional<PacketRecord> delivered;
    std::vector<PacketRecord> codel_drops;
};

struct QueueStats {
    std::uint64_t enqueued = 0;
    std::uint64_t dequeued = 0;
    std::uint64_t dropped_tail = 0;
    std::uint64_t dropped_codel = 0;
    std::uint64_t flushed = 0;

    std::uint64_t dropped() const { return dropped_tail + dropped_codel; }
};

// One traffic-management queue: a bounded packet buffer managed by FIFO or
// CoDel, with an optional token-bucket shaper on its egress.
class TmQueue {
  public:
    TmQueue() = default;
    TmQueue(QueueId id, QueueDiscipline discipline, std::optional<QRR> shaper,
            TimeUs now = 0);

    QueueId id() const { return id_; }
    const QueueDiscipline& discipline() const { return discipline_; }

    EnqueueResult enqueue(PacketRecord packet, TimeUs now);

    // FIFO: pops the head. CoDel: runs the RFC 8289 state machine on the
    // head sojourn times; dropped packets are returned alongside the first
    // surviving head.
    DequeueResult dequeue(TimeUs now);

    // Earliest time the head packet may leave under the shaper. `now` when
    // unshaped or tokens suffice; kNever when rate_bps == 0.
    TimeUs shaper_release_time(TimeUs now);
    // Debits the bucket for an actually transmitted packet.
    void consume_tokens(std::uint32_t bytes);

    bool empty() const { return buffered_.empty(); }
    std::size_t size() const { return buffered_.size(); }
    std::uint64_t buffered_bytes() const { return buffered_bytes_; }
    const PacketRecord* head() const {
        return buffered_.empty() ? nullptr : &buffered_.front().packet;
    }
    TimeUs head_enqueue_time() const {
        return buffered_.empty() ? kNever : buffered_.front().enqueue_time;
    }

    const QueueStats& stats() const { return stats_; }
    double tokens_bytes() const { return tokens_bytes_; }

    // Live reconfiguration. Changing the discipline keeps buffered packets;
    // CoDel control state restarts. Shaper changes clamp tokens to the new
    // burst and apply forward.
    void set_discipline(const QueueDiscipline& d);
    void set_shaper(std::optional<QRR> shaper, TimeUs now);

    // Drains everything (session release). Returns the flushed packets.
    std::vector<PacketRecord> flush();

    template <typename Fn>
    void for_each_buffered(Fn&& fn) const {
        for (const auto& e : buffered_) fn(e.packet);
    }

  private:
    struct Entry {
        PacketRecord packet;
        TimeUs enqueue_time;
    };

    struct PopResult {
        std::optional<Entry> entry;
        bool ok_to_drop = false;
    };

    PopResult do_dequeue(TimeUs now);
    void refill_tokens(TimeUs now);
    TimeUs drop_gap() const;

    QueueId id_ = 0;
    QueueDiscipline discipline_;
    std::deque<Entry> buffered_;
    std::uint64_t buffered_bytes_ = 0;
    std::uint32_t max_packet_bytes_ = 1500;

    // CoDel control state.
    TimeUs first_above_time_ = 0;
    TimeUs drop_next_ = 0;
    std::uint32_t drop_count_ = 0;
    std::uint32_t last_drop_count_ = 0;
    bool dropping_ = false;

    // Token-bucket shaper state.
    std::optional<QRR> shaper_;
    double tokens_bytes_ = 0.0;
    TimeUs last_refill_ = 0;

    QueueStats stats_;
};

}  // namespace iup

#endif
