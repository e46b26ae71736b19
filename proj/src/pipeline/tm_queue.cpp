#include "iup/pipeline/tm_queue.hpp"

#include <algorithm>
#include <cmath>

namespace iup {

TmQueue::TmQueue(QueueId id, QueueDiscipline discipline, std::optional<QRR> shaper,
                 TimeUs now)
    : id_(id), discipline_(discipline), shaper_(std::move(shaper)), last_refill_(now) {
    if (shaper_) {
        tokens_bytes_ = shaper_->burst_bytes;
    }
}

EnqueueResult TmQueue::enqueue(PacketRecord packet, TimeUs now) {
    ++stats_.enqueued;
    if (buffered_.size() >= discipline_.capacity_packets) {
        ++stats_.dropped_tail;
        return EnqueueResult::TailDropped;
    }
    max_packet_bytes_ = std::max(max_packet_bytes_, packet.size_bytes);
    buffered_bytes_ += packet.size_bytes;
    packet.stamp("enqueued", now);
    buffered_.push_back({std::move(packet), now});
    return EnqueueResult::Accepted;
}

// CoDel dodequeue: pops the head and decides whether the persistent-delay
// condition allows dropping it.
TmQueue::PopResult TmQueue::do_dequeue(TimeUs now) {
    PopResult r;
    if (buffered_.empty()) {
        first_above_time_ = 0;
        return r;
    }
    r.entry = std::move(buffered_.front());
    buffered_.pop_front();
    buffered_bytes_ -= r.entry->packet.size_bytes;

    const TimeUs sojourn = now - r.entry->enqueue_time;
    if (sojourn < discipline_.target_us || buffered_bytes_ <= max_packet_bytes_) {
        // Went (or stayed) below target; stay out of the above-target episode.
        first_above_time_ = 0;
    } else if (first_above_time_ == 0) {
        // Just crossed target; eligible to drop after one full interval above.
        first_above_time_ = now + discipline_.interval_us;
    } else if (now >= first_above_time_) {
        r.ok_to_drop = true;
    }
    return r;
}

// Gap scheduled after the k-th drop of an episode: interval / sqrt(k + 1).
TimeUs TmQueue::drop_gap() const {
    return static_cast<TimeUs>(
        std::llround(discipline_.interval_us / std::sqrt(double(drop_count_) + 1.0)));
}

DequeueResult TmQueue::dequeue(TimeUs now) {
    DequeueResult result;

    if (discipline_.kind == QueueDisciplineKind::Fifo) {
        if (buffered_.empty()) return result;
        Entry e = std::move(buffered_.front());
        buffered_.pop_front();
        buffered_bytes_ -= e.packet.size_bytes;
        e.packet.stamp("dequeued", now);
        ++stats_.dequeued;
        result.delivered = std::move(e.packet);
        return result;
    }

    auto drop = [&](PopResult& r) {
        ++stats_.dropped_codel;
        result.codel_drops.push_back(std::move(r.entry->packet));
    };

    PopResult r = do_dequeue(now);
    if (!r.entry) {
        dropping_ = false;
        return result;
    }
    if (dropping_) {
        if (!r.ok_to_drop) {
            dropping_ = false;
        }
        while (dropping_ && now >= drop_next_) {
            drop(r);
            ++drop_count_;
            r = do_dequeue(now);
            if (!r.entry) {
                dropping_ = false;
                return result;
            }
            if (!r.ok_to_drop) {
                dropping_ = false;
            } else {
                drop_next_ += drop_gap();
            }
        }
    } else if (r.ok_to_drop) {
        drop(r);
        r = do_dequeue(now);
        dropping_ = true;
        // Resume near the previous episode's drop rate if we were recently
        // dropping, otherwise restart the control law.
        const std::uint32_t delta = drop_count_ - last_drop_count_;
        drop_count_ =
            (delta > 1 && now - drop_next_ < 16 * discipline_.interval_us) ? delta : 1;
        last_drop_count_ = drop_count_;
        drop_next_ = now + drop_gap();
        if (!r.entry) {
            dropping_ = false;
            return result;
        }
    }

    r.entry->packet.stamp("dequeued", now);
    ++stats_.dequeued;
    result.delivered = std::move(r.entry->packet);
    return result;
}

void TmQueue::refill_tokens(TimeUs now) {
    if (!shaper_ || shaper_->rate_bps == 0) return;
    if (now <= last_refill_) return;
    const double elapsed_us = double(now - last_refill_);
    tokens_bytes_ += elapsed_us * double(shaper_->rate_bps) / 8e6;
    tokens_bytes_ = std::min(tokens_bytes_, double(shaper_->burst_bytes));
    last_refill_ = now;
}

TimeUs TmQueue::shaper_release_time(TimeUs now) {
    if (!shaper_) return now;
    if (shaper_->rate_bps == 0) return kNever;
    refill_tokens(now);
    const PacketRecord* h = head();
    const double need = h ? double(h->size_bytes) : 0.0;
    if (tokens_bytes_ >= need) return now;
    const double deficit = need - tokens_bytes_;
    const auto wait_us =
        static_cast<TimeUs>(std::ceil(deficit * 8e6 / double(shaper_->rate_bps)));
    return now + wait_us;
}

void TmQueue::consume_tokens(std::uint32_t bytes) {
    if (shaper_) tokens_bytes_ -= double(bytes);
}

void TmQueue::set_discipline(const QueueDiscipline& d) {
    if (!(d == discipline_)) {
        first_above_time_ = 0;
        drop_next_ = 0;
        drop_count_ = 0;
        last_drop_count_ = 0;
        dropping_ = false;
    }
    discipline_ = d;
}

void TmQueue::set_shaper(std::optional<QRR> shaper, TimeUs now) {
    const bool had = shaper_.has_value();
    shaper_ = std::move(shaper);
    if (!shaper_) return;
    if (!had) {
        tokens_bytes_ = shaper_->burst_bytes;
    } else {
        tokens_bytes_ = std::min(tokens_bytes_, double(shaper_->burst_bytes));
    }
    last_refill_ = now;
}

std::vector<PacketRecord> TmQueue::flush() {
    std::vector<PacketRecord> out;
    out.reserve(buffered_.size());
    for (auto& e : buffered_) out.push_back(std::move(e.packet));
    stats_.flushed += buffered_.size();
    buffered_.clear();
    buffered_bytes_ = 0;
    first_above_time_ = 0;
    dropping_ = false;
    return out;
}

}  // namespace iup
