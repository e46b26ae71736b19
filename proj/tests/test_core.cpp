#include <doctest.h>

#include "iup/core/rules.hpp"
#include "iup/core/types.hpp"

using namespace iup;

namespace {

PacketRecord make_packet(std::uint8_t dscp, std::uint32_t size = 1500) {
    PacketRecord p;
    p.packet_id = 1;
    p.flow.src_ip = IpAddr::parse("10.0.0.1");
    p.flow.dst_ip = IpAddr::parse("10.45.0.1");
    p.flow.src_port = 5000;
    p.flow.dst_port = 5201;
    p.flow.protocol = 6;
    p.dscp = dscp;
    p.size_bytes = size;
    return p;
}

// Four-queue set in the shape of the programmability experiment's third
// phase: per-class queues plus a default, shapers under the USR budget.
RuleSet experiment_rule_set() {
    RuleSet r;
    r.pdrs = {
        {1, 10, MatchSpec{.dscp = std::uint8_t(8)}, 1, false},
        {2, 10, MatchSpec{.dscp = std::uint8_t(10)}, 2, false},
        {3, 10, MatchSpec{.dscp = std::uint8_t(18)}, 3, false},
        {4, 255, MatchSpec{.is_default = true}, 0, true},
    };
    r.fars = {{0, ForwardAction::Forward},
              {1, ForwardAction::Forward},
              {2, ForwardAction::Forward},
              {3, ForwardAction::Forward}};
    r.bars = {{0, QueueDiscipline::fifo(1000)},
              {1, QueueDiscipline::codel()},
              {2, QueueDiscipline::codel()},
              {3, QueueDiscipline::fifo(1000)}};
    r.qrrs = {{1, 10'000'000, 15000}, {2, 38'000'000, 15000}};
    r.dsrs = {{1, 1}};
    r.usr = USR{1, 50'000'000, std::nullopt};
    return r;
}

}  // namespace

TEST_CASE("ip address parse and format") {
    const auto ip = IpAddr::parse("10.45.0.1");
    CHECK(ip.to_string() == "10.45.0.1");
    CHECK(IpAddr::parse("0.0.0.0").value == 0u);
    CHECK(IpAddr::parse("255.255.255.255").value == 0xffffffffu);
    CHECK_THROWS_AS(IpAddr::parse("256.0.0.1"), std::invalid_argument);
    CHECK_THROWS_AS(IpAddr::parse("10.0.0"), std::invalid_argument);
    CHECK_THROWS_AS(IpAddr::parse("10.0.0.1.2"), std::invalid_argument);
}

TEST_CASE("matches: exact dscp") {
    MatchSpec spec;
    spec.dscp = 10;
    CHECK(matches(spec, make_packet(10)));
    CHECK_FALSE(matches(spec, make_packet(18)));
}

TEST_CASE("matches: default spec matches any packet") {
    MatchSpec spec;
    spec.is_default = true;
    CHECK(matches(spec, make_packet(0)));
    CHECK(matches(spec, make_packet(46)));
}

TEST_CASE("matches: five-tuple predicates") {
    MatchSpec spec;
    spec.src_ip = IpAddr::parse("10.0.0.1");
    spec.dst_port = 5201;
    CHECK(matches(spec, make_packet(0)));
    spec.dst_port = 80;
    CHECK_FALSE(matches(spec, make_packet(0)));
    spec = MatchSpec{};
    spec.protocol = 17;
    CHECK_FALSE(matches(spec, make_packet(0)));
}

TEST_CASE("matches is pure") {
    MatchSpec spec;
    spec.dscp = 10;
    const auto p = make_packet(10);
    for (int i = 0; i < 100; ++i) CHECK(matches(spec, p));
}

TEST_CASE("dscp service classes") {
    CHECK(dscp_service_class(8) == ServiceClass::LowPriority);
    CHECK(dscp_service_class(10) == ServiceClass::LowLatency);
    CHECK(dscp_service_class(18) == ServiceClass::HighThroughput);
    CHECK(dscp_service_class(0) == ServiceClass::Unclassified);
}

TEST_CASE("dscp service class is total over 0..63 and rejects the rest") {
    for (int cp = 0; cp <= 63; ++cp) CHECK_NOTHROW(dscp_service_class(cp));
    CHECK_THROWS_AS(dscp_service_class(64), std::out_of_range);
    CHECK_THROWS_AS(dscp_service_class(-1), std::out_of_range);
}

TEST_CASE("validate: dangling queue reference") {
    RuleSet r;
    r.pdrs = {{1, 10, MatchSpec{.dscp = std::uint8_t(10)}, 3, false}};
    r.bars = {{0, QueueDiscipline::fifo()}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].where == "pdr 1");
    CHECK(v[0].reason.find("queue 3") != std::string::npos);
}

TEST_CASE("validate: non-default PDR needs at least one predicate") {
    RuleSet r;
    r.pdrs = {{1, 10, MatchSpec{}, 0, false}};
    r.bars = {{0, QueueDiscipline::fifo()}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == "match has no predicate and is not default");
}

TEST_CASE("validate: two default PDRs") {
    RuleSet r;
    r.pdrs = {{1, 255, MatchSpec{.is_default = true}, 0, true},
              {2, 255, MatchSpec{.is_default = true}, 0, true}};
    r.bars = {{0, QueueDiscipline::fifo()}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == "more than one default PDR");
}

TEST_CASE("validate: well-formed experiment set is clean") {
    CHECK(validate_rule_set(experiment_rule_set()).empty());
}

TEST_CASE("validate: empty rule set implies every reference resolves") {
    const auto r = experiment_rule_set();
    REQUIRE(validate_rule_set(r).empty());
    const auto queues = r.queue_ids();
    for (const auto& p : r.pdrs) {
        CHECK(std::binary_search(queues.begin(), queues.end(), p.target_queue));
    }
    for (const auto& q : r.qrrs) {
        CHECK(std::binary_search(queues.begin(), queues.end(), q.queue));
    }
    for (const auto& f : r.fars) {
        CHECK(std::binary_search(queues.begin(), queues.end(), f.queue));
    }
}

TEST_CASE("validate: codel target must stay below interval") {
    RuleSet r;
    r.bars = {{0, QueueDiscipline::codel(100'000, 100'000)}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == "CoDel target must be < interval");
}

TEST_CASE("validate: shaper burst below one MTU") {
    RuleSet r;
    r.bars = {{0, QueueDiscipline::fifo()}};
    r.qrrs = {{0, 1'000'000, 500}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == "burst_bytes below one MTU");
    r.qrrs = {{0, 0, 500}};  // blocked queue needs no burst headroom
    CHECK(validate_rule_set(r).empty());
}

TEST_CASE("validate: strict priority must cover every queue") {
    RuleSet r;
    r.bars = {{0, QueueDiscipline::fifo()}, {1, QueueDiscipline::fifo()}};
    r.psr.policy = PsrPolicy::StrictPriority;
    r.psr.priorities = {{0, 0}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].where == "psr");
}

TEST_CASE("validate: shaped egress must stay within the USR rate") {
    auto r = experiment_rule_set();
    REQUIRE(validate_rule_set(r).empty());
    r.qrrs = {{1, 20'000'000, 15000}, {2, 38'000'000, 15000}};  // 58 > 50 Mbps
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].where == "usr");
}

TEST_CASE("validate: deterministic ordering by rule id") {
    RuleSet r;
    r.pdrs = {{7, 10, MatchSpec{.dscp = std::uint8_t(10)}, 9, false},
              {2, 10, MatchSpec{.dscp = std::uint8_t(8)}, 8, false}};
    r.bars = {{0, QueueDiscipline::fifo()}};
    const auto v = validate_rule_set(r);
    REQUIRE(v.size() == 2);
    CHECK(v[0].where == "pdr 2");
    CHECK(v[1].where == "pdr 7");
}

TEST_CASE("cell config defaults") {
    CellConfig cell;
    CHECK(cell.prb_count == 106);
    CHECK(cell.tdd_period_slots() == 9);
    CHECK(cell.slot_duration_us() == 500);
}
