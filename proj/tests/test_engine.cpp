#include <doctest.h>

#include <vector>

#include "iup/sim/engine.hpp"
#include "iup/sim/source.hpp"

using namespace iup;

TEST_CASE("empty engine run returns immediately") {
    Engine e;
    e.run_until(1'000'000);
    CHECK(e.now() == 1'000'000);
    CHECK(e.processed() == 0);
}

TEST_CASE("same-time events fire in insertion order") {
    Engine e;
    std::vector<int> order;
    e.schedule(100, EventKind::Arrival, [&] { order.push_back(1); });
    e.schedule(100, EventKind::Arrival, [&] { order.push_back(2); });
    e.schedule(50, EventKind::Arrival, [&] { order.push_back(0); });
    e.schedule(100, EventKind::Arrival, [&] { order.push_back(3); });
    e.run_until(200);
    CHECK(order == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("events only run up to the horizon") {
    Engine e;
    int fired = 0;
    e.schedule(100, EventKind::Arrival, [&] { ++fired; });
    e.schedule(300, EventKind::Arrival, [&] { ++fired; });
    e.run_until(200);
    CHECK(fired == 1);
    e.run_until(400);
    CHECK(fired == 2);
}

TEST_CASE("scheduling into the past is a fatal engine bug") {
    Engine e;
    e.schedule(100, EventKind::Arrival, [] {});
    e.run_until(100);
    CHECK_THROWS_AS(e.schedule(50, EventKind::Arrival, [] {}), std::logic_error);
}

TEST_CASE("events may schedule further events") {
    Engine e;
    int hops = 0;
    std::function<void()> hop = [&] {
        if (++hops < 5) e.schedule(e.now() + 10, EventKind::SlotTick, hop);
    };
    e.schedule(0, EventKind::SlotTick, hop);
    e.run_until(1000);
    CHECK(hops == 5);
    CHECK(e.now() == 1000);
}

TEST_CASE("aimd window: additive increase per ack") {
    AimdWindow w;
    w.cwnd_bytes = 10.0 * 1440.0;
    w.max_cwnd_bytes = 1e9;
    w.mss_bytes = 1440;
    w.on_ack();
    // cwnd += mss*mss/cwnd: 10 MSS -> 10.1 MSS.
    CHECK(w.cwnd_bytes == doctest::Approx(10.1 * 1440.0).epsilon(1e-9));
}

TEST_CASE("aimd window: multiplicative decrease halves, floored at one MSS") {
    AimdWindow w;
    w.cwnd_bytes = 20.0 * 1440.0;
    w.mss_bytes = 1440;
    w.on_loss();
    CHECK(w.cwnd_bytes == doctest::Approx(10.0 * 1440.0));
    w.cwnd_bytes = 1.2 * 1440.0;
    w.on_loss();
    CHECK(w.cwnd_bytes == doctest::Approx(1440.0));
}

TEST_CASE("aimd window: growth capped at max cwnd") {
    AimdWindow w;
    w.cwnd_bytes = 9999.0;
    w.max_cwnd_bytes = 10000.0;
    w.mss_bytes = 1440;
    for (int i = 0; i < 10; ++i) w.on_ack();
    CHECK(w.cwnd_bytes == 10000.0);
}

TEST_CASE("cbr inter-packet interval") {
    SourceConfig s;
    s.kind = SourceKind::Cbr;
    s.cbr_rate_bps = 8'000'000;
    s.cbr_packet_bytes = 1000;
    CHECK(s.cbr_interval_us() == 1000);  // 1000 B at 8 Mbps -> 1 ms
}
