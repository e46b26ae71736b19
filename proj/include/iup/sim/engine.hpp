#ifndef IUP_SIM_ENGINE_HPP
#define IUP_SIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "iup/core/types.hpp"

namespace iup {

enum class EventKind {
    Arrival,
    ShaperRelease,
    PacerRelease,
    SlotTick,
    ControlApply,
    AckDelivery,
    MeasureTick,
    SourceTick,
};

// Deterministic discrete-event engine. Events fire in (time, sequence)
// order; the sequence is assigned at scheduling time, so same-time events
// run in insertion order.
class Engine {
  public:
    TimeUs now() const { return now_; }

    void schedule(TimeUs at, EventKind kind, std::function<void()> fn);

    // Processes every event with time <= t_end.
    void run_until(TimeUs t_end);

    bool empty() const { return queue_.empty(); }
    std::uint64_t processed() const { return processed_; }

  private:
    struct Event {
        TimeUs time;
        std::uint64_t seq;
        EventKind kind;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    TimeUs now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t processed_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace iup

#endif
