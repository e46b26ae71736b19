#include "iup/sim/engine.hpp"

#include <stdexcept>

namespace iup {

void Engine::schedule(TimeUs at, EventKind kind, std::function<void()> fn) {
    if (at < now_) {
        throw std::logic_error("event scheduled in the past: " + std::to_string(at) +
                               " < " + std::to_string(now_));
    }
    queue_.push({at, next_seq_++, kind, std::move(fn)});
}

void Engine::run_until(TimeUs t_end) {
    while (!queue_.empty() && queue_.top().time <= t_end) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.time;
        ++processed_;
        ev.fn();
    }
    if (now_ < t_end) now_ = t_end;
}

}  // namespace iup
