#ifndef IUP_CONTROL_SESSION_HPP
#define IUP_CONTROL_SESSION_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iup/core/rules.hpp"
#include "iup/core/types.hpp"

namespace iup {

enum class ControlOrigin { Smf, Ric };

const char* to_string(ControlOrigin o);

// Partial rule update: any subset of the eight rule kinds. List-valued
// kinds merge by rule id (replace on match, insert otherwise); psr/trr/usr
// replace wholesale.
struct RuleDeltas {
    std::vector<PDR> pdrs;
    std::vector<FAR> fars;
    std::vector<BAR> bars;
    std::vector<QRR> qrrs;
    std::optional<PSR> psr;
    std::optional<TRR> trr;
    std::vector<DSR> dsrs;
    std::optional<USR> usr;

    bool touches_smf_rules() const { return !pdrs.empty() || !fars.empty() || !bars.empty(); }
    bool touches_ric_rules() const {
        return !qrrs.empty() || psr.has_value() || trr.has_value() || !dsrs.empty() ||
               usr.has_value();
    }
    bool empty() const { return !touches_smf_rules() && !touches_ric_rules(); }
};

struct ControlUpdate {
    TimeUs apply_at_us = 0;
    ControlOrigin origin = ControlOrigin::Smf;
    SessionId session_id = 0;
    RuleDeltas deltas;
};

// Rule-origin authority: PDR/FAR/BAR belong to the SMF, the five
// traffic/radio rules to the RIC. Returns a violation message or nullopt.
std::optional<std::string> authority_violation(const RuleDeltas& deltas,
                                               ControlOrigin origin);

RuleSet merge_rules(RuleSet base, const RuleDeltas& deltas);

enum class SessionErrorCode {
    InvalidRules,
    PoolExhausted,
    DuplicateSession,
    UnknownSession,
    AuthorityViolation,
    PastApplyTime,
    SessionReleasing,
};

class SessionError : public std::runtime_error {
  public:
    SessionError(SessionErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    SessionErrorCode code() const { return code_; }

  private:
    SessionErrorCode code_;
};

struct SessionConfig {
    SessionId session_id = 0;
    UeId ue_id = 0;
    RuleSet rules;
    std::map<QueueId, DrbId> drb_map;
};

// PFCP-lite session lifecycle: IP anchoring from a deterministic pool,
// rule installation, modification and release. Pipeline state lives with
// the engine that owns it; release here frees the IP and hands the record
// back for queue flushing.
class SessionTable {
  public:
    explicit SessionTable(IpAddr pool_base = IpAddr::parse("10.45.0.1"),
                          std::uint32_t pool_size = 1024);

    SessionRecord& establish(const SessionConfig& config);
    SessionRecord& modify(SessionId id, const RuleDeltas& deltas);
    SessionRecord release(SessionId id);

    SessionRecord* find(SessionId id);
    const SessionRecord* find(SessionId id) const;
    const std::map<SessionId, SessionRecord>& sessions() const { return sessions_; }

  private:
    IpAddr allocate_ip();

    IpAddr pool_base_;
    std::uint32_t pool_size_;
    std::uint32_t pool_cursor_ = 0;
    std::vector<IpAddr> free_ips_;
    std::map<SessionId, SessionRecord> sessions_;
};

}  // namespace iup

#endif
