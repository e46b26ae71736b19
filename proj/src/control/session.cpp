#include "iup/control/session.hpp"

#include <algorithm>

namespace iup {

const char* to_string(ControlOrigin o) {
    return o == ControlOrigin::Smf ? "smf" : "ric";
}

std::optional<std::string> authority_violation(const RuleDeltas& deltas,
                                               ControlOrigin origin) {
    if (origin == ControlOrigin::Ric && deltas.touches_smf_rules()) {
        return "PDR/FAR/BAR changes require smf origin";
    }
    if (origin == ControlOrigin::Smf && deltas.touches_ric_rules()) {
        return "QRR/PSR/TRR/DSR/USR changes require ric origin";
    }
    return std::nullopt;
}

namespace {

template <typename Rule, typename Key>
void merge_by_id(std::vector<Rule>& base, const std::vector<Rule>& deltas, Key key) {
    for (const auto& d : deltas) {
        auto it = std::find_if(base.begin(), base.end(),
                               [&](const Rule& r) { return key(r) == key(d); });
        if (it != base.end()) {
            *it = d;
        } else {
            base.push_back(d);
        }
    }
}

}  // namespace

RuleSet merge_rules(RuleSet base, const RuleDeltas& deltas) {
    merge_by_id(base.pdrs, deltas.pdrs, [](const PDR& p) { return p.pdr_id; });
    merge_by_id(base.fars, deltas.fars, [](const FAR& f) { return f.queue; });
    merge_by_id(base.bars, deltas.bars, [](const BAR& b) { return b.queue; });
    merge_by_id(base.qrrs, deltas.qrrs, [](const QRR& q) { return q.queue; });
    merge_by_id(base.dsrs, deltas.dsrs, [](const DSR& d) { return d.drb_id; });
    if (deltas.psr) base.psr = *deltas.psr;
    if (deltas.trr) base.trr = *deltas.trr;
    if (deltas.usr) base.usr = *deltas.usr;
    return base;
}

SessionTable::SessionTable(IpAddr pool_base, std::uint32_t pool_size)
    : pool_base_(pool_base), pool_size_(pool_size) {}

IpAddr SessionTable::allocate_ip() {
    if (!free_ips_.empty()) {
        IpAddr ip = free_ips_.back();
        free_ips_.pop_back();
        return ip;
    }
    if (pool_cursor_ >= pool_size_) {
        throw SessionError(SessionErrorCode::PoolExhausted, "IP pool exhausted");
    }
    return IpAddr{pool_base_.value + pool_cursor_++};
}

SessionRecord& SessionTable::establish(const SessionConfig& config) {
    if (sessions_.count(config.session_id)) {
        throw SessionError(SessionErrorCode::DuplicateSession,
                           "session " + std::to_string(config.session_id) +
                               " already established");
    }
    const auto violations = validate_rule_set(config.rules);
    if (!violations.empty()) {
        std::string msg = "invalid rules:";
        for (const auto& v : violations) msg += " [" + v.where + ": " + v.reason + "]";
        throw SessionError(SessionErrorCode::InvalidRules, msg);
    }
    SessionRecord rec;
    rec.session_id = config.session_id;
    rec.ue_id = config.ue_id;
    rec.allocated_ip = allocate_ip();
    rec.rules = config.rules;
    rec.drb_map = config.drb_map;
    rec.state = SessionState::Active;
    auto [it, ok] = sessions_.emplace(config.session_id, std::move(rec));
    return it->second;
}

SessionRecord& SessionTable::modify(SessionId id, const RuleDeltas& deltas) {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw SessionError(SessionErrorCode::UnknownSession,
                           "unknown session " + std::to_string(id));
    }
    if (it->second.state != SessionState::Active) {
        throw SessionError(SessionErrorCode::SessionReleasing,
                           "session " + std::to_string(id) + " is releasing");
    }
    RuleSet merged = merge_rules(it->second.rules, deltas);
    const auto violations = validate_rule_set(merged);
    if (!violations.empty()) {
        std::string msg = "merged rules invalid:";
        for (const auto& v : violations) msg += " [" + v.where + ": " + v.reason + "]";
        throw SessionError(SessionErrorCode::InvalidRules, msg);
    }
    it->second.rules = std::move(merged);
    return it->second;
}

SessionRecord SessionTable::release(SessionId id) {
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw SessionError(SessionErrorCode::UnknownSession,
                           "unknown session " + std::to_string(id));
    }
    SessionRecord rec = std::move(it->second);
    sessions_.erase(it);
    free_ips_.push_back(rec.allocated_ip);
    rec.state = SessionState::Releasing;
    return rec;
}

SessionRecord* SessionTable::find(SessionId id) {
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : &it->second;
}

const SessionRecord* SessionTable::find(SessionId id) const {
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : &it->second;
}

}  // namespace iup
