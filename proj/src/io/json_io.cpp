#include "iup/io/json_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace iup {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::string& ctx) {
    if (!j.is_object()) {
        throw ScenarioParseError(ctx + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ScenarioParseError(ctx + ": unknown field '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

template <typename T>
T get_req(const Json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key)) {
        throw ScenarioParseError(ctx + ": missing field '" + key + "'");
    }
    return j.at(key).get<T>();
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string fixed2(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- rules

static Json match_to_json(const MatchSpec& m) {
    Json j = Json::object();
    if (m.src_ip) j["src_ip"] = m.src_ip->to_string();
    if (m.dst_ip) j["dst_ip"] = m.dst_ip->to_string();
    if (m.src_port) j["src_port"] = *m.src_port;
    if (m.dst_port) j["dst_port"] = *m.dst_port;
    if (m.protocol) j["protocol"] = *m.protocol;
    if (m.dscp) j["dscp"] = *m.dscp;
    return j;
}

static MatchSpec match_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"src_ip", "dst_ip", "src_port", "dst_port", "protocol", "dscp"}, ctx);
    MatchSpec m;
    if (j.contains("src_ip")) m.src_ip = IpAddr::parse(j.at("src_ip").get<std::string>());
    if (j.contains("dst_ip")) m.dst_ip = IpAddr::parse(j.at("dst_ip").get<std::string>());
    if (j.contains("src_port")) m.src_port = j.at("src_port").get<std::uint16_t>();
    if (j.contains("dst_port")) m.dst_port = j.at("dst_port").get<std::uint16_t>();
    if (j.contains("protocol")) m.protocol = j.at("protocol").get<std::uint8_t>();
    if (j.contains("dscp")) m.dscp = j.at("dscp").get<std::uint8_t>();
    return m;
}

Json rule_set_to_json(const RuleSet& rules) {
    Json j = Json::object();
    j["pdrs"] = Json::array();
    for (const auto& p : rules.pdrs) {
        Json pj = {{"pdr_id", p.pdr_id},
                   {"precedence", p.precedence},
                   {"target_queue", p.target_queue}};
        if (p.is_default) {
            pj["is_default"] = true;
        } else {
            pj["match"] = match_to_json(p.match);
        }
        j["pdrs"].push_back(pj);
    }
    j["fars"] = Json::array();
    for (const auto& f : rules.fars) {
        j["fars"].push_back(
            {{"queue", f.queue},
             {"action", f.action == ForwardAction::Forward ? "forward" : "drop"}});
    }
    j["bars"] = Json::array();
    for (const auto& b : rules.bars) {
        Json bj = {{"queue", b.queue},
                   {"capacity_packets", b.discipline.capacity_packets}};
        if (b.discipline.kind == QueueDisciplineKind::CoDel) {
            bj["discipline"] = "codel";
            bj["target_us"] = b.discipline.target_us;
            bj["interval_us"] = b.discipline.interval_us;
        } else {
            bj["discipline"] = "fifo";
        }
        j["bars"].push_back(bj);
    }
    j["qrrs"] = Json::array();
    for (const auto& q : rules.qrrs) {
        j["qrrs"].push_back(
            {{"queue", q.queue}, {"rate_bps", q.rate_bps}, {"burst_bytes", q.burst_bytes}});
    }
    if (rules.psr.policy == PsrPolicy::StrictPriority) {
        Json prios = Json::object();
        for (const auto& [q, p] : rules.psr.priorities) prios[std::to_string(q)] = p;
        j["psr"] = {{"policy", "strict_priority"}, {"priorities", prios}};
    } else {
        j["psr"] = {{"policy", "round_robin"}};
    }
    switch (rules.trr.mode) {
        case TrrMode::None: j["trr"] = {{"mode", "none"}}; break;
        case TrrMode::FixedRate:
            j["trr"] = {{"mode", "fixed_rate"}, {"rate_bps", rules.trr.rate_bps}};
            break;
        case TrrMode::BdpPacer: j["trr"] = {{"mode", "bdp_pacer"}}; break;
    }
    j["dsrs"] = Json::array();
    for (const auto& d : rules.dsrs) {
        j["dsrs"].push_back({{"drb_id", d.drb_id}, {"weight", d.weight}});
    }
    if (rules.usr) {
        Json uj = {{"ue_id", rules.usr->ue_id}, {"max_rate_bps", rules.usr->max_rate_bps}};
        if (rules.usr->deadline_us) uj["deadline_us"] = *rules.usr->deadline_us;
        j["usr"] = uj;
    } else {
        j["usr"] = nullptr;
    }
    return j;
}

static PSR psr_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"policy", "priorities"}, ctx);
    PSR psr;
    const auto policy = get_req<std::string>(j, "policy", ctx);
    if (policy == "round_robin") {
        psr.policy = PsrPolicy::RoundRobin;
    } else if (policy == "strict_priority") {
        psr.policy = PsrPolicy::StrictPriority;
        if (j.contains("priorities")) {
            for (const auto& [k, v] : j.at("priorities").items()) {
                psr.priorities[QueueId(std::stoul(k))] = v.get<std::int32_t>();
            }
        }
    } else {
        throw ScenarioParseError(ctx + ": unknown psr policy '" + policy + "'");
    }
    return psr;
}

static TRR trr_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"mode", "rate_bps"}, ctx);
    TRR trr;
    const auto mode = get_req<std::string>(j, "mode", ctx);
    if (mode == "none") {
        trr.mode = TrrMode::None;
    } else if (mode == "fixed_rate") {
        trr.mode = TrrMode::FixedRate;
        trr.rate_bps = get_req<std::uint64_t>(j, "rate_bps", ctx);
    } else if (mode == "bdp_pacer") {
        trr.mode = TrrMode::BdpPacer;
    } else {
        throw ScenarioParseError(ctx + ": unknown trr mode '" + mode + "'");
    }
    return trr;
}

static USR usr_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"ue_id", "max_rate_bps", "deadline_us"}, ctx);
    USR usr;
    usr.ue_id = get_req<UeId>(j, "ue_id", ctx);
    usr.max_rate_bps = get_req<std::uint64_t>(j, "max_rate_bps", ctx);
    if (j.contains("deadline_us") && !j.at("deadline_us").is_null()) {
        usr.deadline_us = j.at("deadline_us").get<TimeUs>();
    }
    return usr;
}

RuleSet rule_set_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"pdrs", "fars", "bars", "qrrs", "psr", "trr", "dsrs", "usr"}, ctx);
    RuleSet rules;
    if (j.contains("pdrs")) {
        for (const auto& pj : j.at("pdrs")) {
            require_keys(pj, {"pdr_id", "precedence", "target_queue", "is_default", "match"},
                         ctx + ".pdrs");
            PDR p;
            p.pdr_id = get_req<std::uint32_t>(pj, "pdr_id", ctx);
            p.precedence = get_or<std::int32_t>(pj, "precedence", 0);
            p.target_queue = get_req<QueueId>(pj, "target_queue", ctx);
            p.is_default = get_or(pj, "is_default", false);
            if (pj.contains("match")) {
                p.match = match_from_json(pj.at("match"), ctx + ".pdrs.match");
            }
            p.match.is_default = p.is_default;
            rules.pdrs.push_back(p);
        }
    }
    if (j.contains("fars")) {
        for (const auto& fj : j.at("fars")) {
            require_keys(fj, {"queue", "action"}, ctx + ".fars");
            FAR f;
            f.queue = get_req<QueueId>(fj, "queue", ctx);
            const auto action = get_req<std::string>(fj, "action", ctx);
            if (action == "forward") {
                f.action = ForwardAction::Forward;
            } else if (action == "drop") {
                f.action = ForwardAction::Drop;
            } else {
                throw ScenarioParseError(ctx + ": unknown far action '" + action + "'");
            }
            rules.fars.push_back(f);
        }
    }
    if (j.contains("bars")) {
        for (const auto& bj : j.at("bars")) {
            require_keys(bj, {"queue", "discipline", "capacity_packets", "target_us",
                              "interval_us"},
                         ctx + ".bars");
            BAR b;
            b.queue = get_req<QueueId>(bj, "queue", ctx);
            const auto kind = get_req<std::string>(bj, "discipline", ctx);
            const auto capacity = get_or<std::uint32_t>(bj, "capacity_packets", 1000);
            if (kind == "fifo") {
                b.discipline = QueueDiscipline::fifo(capacity);
            } else if (kind == "codel") {
                b.discipline = QueueDiscipline::codel(get_or<TimeUs>(bj, "target_us", 5000),
                                                      get_or<TimeUs>(bj, "interval_us", 100000),
                                                      capacity);
            } else {
                throw ScenarioParseError(ctx + ": unknown discipline '" + kind + "'");
            }
            rules.bars.push_back(b);
        }
    }
    if (j.contains("qrrs")) {
        for (const auto& qj : j.at("qrrs")) {
            require_keys(qj, {"queue", "rate_bps", "burst_bytes"}, ctx + ".qrrs");
            QRR q;
            q.queue = get_req<QueueId>(qj, "queue", ctx);
            q.rate_bps = get_req<std::uint64_t>(qj, "rate_bps", ctx);
            q.burst_bytes = get_or<std::uint32_t>(qj, "burst_bytes", 15000);
            rules.qrrs.push_back(q);
        }
    }
    if (j.contains("psr")) rules.psr = psr_from_json(j.at("psr"), ctx + ".psr");
    if (j.contains("trr")) rules.trr = trr_from_json(j.at("trr"), ctx + ".trr");
    if (j.contains("dsrs")) {
        for (const auto& dj : j.at("dsrs")) {
            require_keys(dj, {"drb_id", "weight"}, ctx + ".dsrs");
            DSR d;
            d.drb_id = get_req<DrbId>(dj, "drb_id", ctx);
            d.weight = get_or<std::uint32_t>(dj, "weight", 1);
            rules.dsrs.push_back(d);
        }
    }
    if (j.contains("usr") && !j.at("usr").is_null()) {
        rules.usr = usr_from_json(j.at("usr"), ctx + ".usr");
    }
    return rules;
}

// -------------------------------------------------------------- updates

Json control_update_to_json(const ControlUpdate& u) {
    Json deltas = Json::object();
    const RuleSet as_set{u.deltas.pdrs, u.deltas.fars,     u.deltas.bars, u.deltas.qrrs,
                         u.deltas.psr ? *u.deltas.psr : PSR{},
                         u.deltas.trr ? *u.deltas.trr : TRR{},
                         u.deltas.dsrs, u.deltas.usr};
    const Json full = rule_set_to_json(as_set);
    if (!u.deltas.pdrs.empty()) deltas["pdrs"] = full.at("pdrs");
    if (!u.deltas.fars.empty()) deltas["fars"] = full.at("fars");
    if (!u.deltas.bars.empty()) deltas["bars"] = full.at("bars");
    if (!u.deltas.qrrs.empty()) deltas["qrrs"] = full.at("qrrs");
    if (u.deltas.psr) deltas["psr"] = full.at("psr");
    if (u.deltas.trr) deltas["trr"] = full.at("trr");
    if (!u.deltas.dsrs.empty()) deltas["dsrs"] = full.at("dsrs");
    if (u.deltas.usr) deltas["usr"] = full.at("usr");
    return Json{{"apply_at_us", u.apply_at_us},
                {"origin", to_string(u.origin)},
                {"session_id", u.session_id},
                {"deltas", deltas}};
}

ControlUpdate control_update_from_json(const Json& j, const std::string& ctx) {
    require_keys(j, {"apply_at_us", "origin", "session_id", "deltas"}, ctx);
    ControlUpdate u;
    u.apply_at_us = get_req<TimeUs>(j, "apply_at_us", ctx);
    const auto origin = get_req<std::string>(j, "origin", ctx);
    if (origin == "smf") {
        u.origin = ControlOrigin::Smf;
    } else if (origin == "ric") {
        u.origin = ControlOrigin::Ric;
    } else {
        throw ScenarioParseError(ctx + ": unknown origin '" + origin + "'");
    }
    u.session_id = get_req<SessionId>(j, "session_id", ctx);
    const Json& dj = j.at("deltas");
    RuleSet partial = rule_set_from_json(dj, ctx + ".deltas");
    u.deltas.pdrs = partial.pdrs;
    u.deltas.fars = partial.fars;
    u.deltas.bars = partial.bars;
    u.deltas.qrrs = partial.qrrs;
    u.deltas.dsrs = partial.dsrs;
    if (dj.contains("psr")) u.deltas.psr = partial.psr;
    if (dj.contains("trr")) u.deltas.trr = partial.trr;
    if (dj.contains("usr") && !dj.at("usr").is_null()) u.deltas.usr = partial.usr;
    return u;
}

// ------------------------------------------------------------- scenario

static Json source_to_json(const SourceConfig& s) {
    Json j = Json::object();
    j["kind"] = s.kind == SourceKind::Aimd ? "aimd" : "cbr";
    j["flow_id"] = s.flow_id;
    j["session_id"] = s.session_id;
    j["dscp"] = s.dscp;
    j["src_ip"] = s.flow.src_ip.to_string();
    j["src_port"] = s.flow.src_port;
    j["dst_port"] = s.flow.dst_port;
    j["protocol"] = s.flow.protocol;
    if (s.start_us) j["start_us"] = s.start_us;
    if (s.kind == SourceKind::Aimd) {
        j["mss_bytes"] = s.aimd.mss_bytes;
        j["wire_bytes"] = s.aimd.wire_bytes;
        j["initial_cwnd_bytes"] = s.aimd.initial_cwnd_bytes;
        j["max_cwnd_bytes"] = s.aimd.max_cwnd_bytes;
        j["base_rtt_us"] = s.aimd.base_rtt_us;
    } else {
        j["rate_bps"] = s.cbr_rate_bps;
        j["packet_bytes"] = s.cbr_packet_bytes;
    }
    return j;
}

static SourceConfig source_from_json(const Json& j, const std::string& ctx) {
    require_keys(j,
                 {"kind", "flow_id", "session_id", "dscp", "src_ip", "src_port", "dst_port",
                  "protocol", "start_us", "mss_bytes", "wire_bytes", "initial_cwnd_bytes",
                  "max_cwnd_bytes", "base_rtt_us", "rate_bps", "packet_bytes"},
                 ctx);
    SourceConfig s;
    const auto kind = get_req<std::string>(j, "kind", ctx);
    if (kind == "aimd") {
        s.kind = SourceKind::Aimd;
    } else if (kind == "cbr") {
        s.kind = SourceKind::Cbr;
    } else {
        throw ScenarioParseError(ctx + ": unknown source kind '" + kind + "'");
    }
    s.flow_id = get_req<FlowId>(j, "flow_id", ctx);
    s.session_id = get_req<SessionId>(j, "session_id", ctx);
    s.dscp = get_req<std::uint8_t>(j, "dscp", ctx);
    s.flow.src_ip = IpAddr::parse(get_or<std::string>(j, "src_ip", "10.0.0.1"));
    s.flow.src_port = get_or<std::uint16_t>(j, "src_port", 5000);
    s.flow.dst_port = get_or<std::uint16_t>(j, "dst_port", 5201);
    s.flow.protocol = get_or<std::uint8_t>(j, "protocol", 6);
    s.start_us = get_or<TimeUs>(j, "start_us", 0);
    if (s.kind == SourceKind::Aimd) {
        s.aimd.mss_bytes = get_or<std::uint32_t>(j, "mss_bytes", 1440);
        s.aimd.wire_bytes = get_or<std::uint32_t>(j, "wire_bytes", 1500);
        s.aimd.initial_cwnd_bytes =
            get_or<double>(j, "initial_cwnd_bytes", 10.0 * s.aimd.mss_bytes);
        s.aimd.max_cwnd_bytes = get_or<double>(j, "max_cwnd_bytes", 393216.0);
        s.aimd.base_rtt_us = get_or<TimeUs>(j, "base_rtt_us", 2000);
    } else {
        s.cbr_rate_bps = get_req<std::uint64_t>(j, "rate_bps", ctx);
        s.cbr_packet_bytes = get_or<std::uint32_t>(j, "packet_bytes", 1000);
    }
    return s;
}

Json scenario_to_json(const ScenarioSpec& spec) {
    Json j = Json::object();
    j["schema"] = spec.schema;
    j["name"] = spec.name;
    j["duration_s"] = double(spec.duration_us) / 1e6;
    j["seed"] = spec.seed;
    j["measure_window_s"] = double(spec.measure_window_us) / 1e6;
    j["settle_s"] = double(spec.settle_us) / 1e6;
    j["cell"] = Json{{"bandwidth_mhz", spec.cell.bandwidth_mhz},
                     {"scs_khz", spec.cell.scs_khz},
                     {"tdd_dl_slots", spec.cell.tdd_dl_slots},
                     {"tdd_ul_slots", spec.cell.tdd_ul_slots},
                     {"prb_count", spec.cell.prb_count},
                     {"bits_per_rb_per_slot", spec.cell.bits_per_rb_per_slot},
                     {"mimo_layers", spec.cell.mimo_layers}};
    j["path"] = Json{{"downlink_oneway_us", spec.path.downlink_oneway_us},
                     {"uplink_oneway_us", spec.path.uplink_oneway_us}};
    j["sessions"] = Json::array();
    for (const auto& s : spec.sessions) {
        Json drb_map = Json::object();
        for (const auto& [q, d] : s.drb_map) drb_map[std::to_string(q)] = d;
        j["sessions"].push_back(Json{{"session_id", s.session_id},
                                     {"ue_id", s.ue_id},
                                     {"rules", rule_set_to_json(s.rules)},
                                     {"drb_map", drb_map}});
    }
    j["sources"] = Json::array();
    for (const auto& s : spec.sources) j["sources"].push_back(source_to_json(s));
    j["updates"] = Json::array();
    for (const auto& u : spec.updates) j["updates"].push_back(control_update_to_json(u));
    return j;
}

ScenarioSpec scenario_from_json(const Json& j) {
    require_keys(j,
                 {"schema", "name", "duration_s", "seed", "measure_window_s", "settle_s",
                  "cell", "path", "sessions", "sources", "updates"},
                 "scenario");
    ScenarioSpec spec;
    spec.schema = get_req<int>(j, "schema", "scenario");
    if (spec.schema != 1) {
        throw ScenarioParseError("scenario: unsupported schema version " +
                                 std::to_string(spec.schema));
    }
    spec.name = get_or<std::string>(j, "name", "scenario");
    spec.duration_us = TimeUs(std::llround(get_req<double>(j, "duration_s", "scenario") * 1e6));
    spec.seed = get_or<std::uint64_t>(j, "seed", 1);
    spec.measure_window_us =
        TimeUs(std::llround(get_or<double>(j, "measure_window_s", 1.0) * 1e6));
    spec.settle_us = TimeUs(std::llround(get_or<double>(j, "settle_s", 3.0) * 1e6));
    if (j.contains("cell")) {
        const Json& c = j.at("cell");
        require_keys(c,
                     {"bandwidth_mhz", "scs_khz", "tdd_dl_slots", "tdd_ul_slots", "prb_count",
                      "bits_per_rb_per_slot", "mimo_layers"},
                     "scenario.cell");
        spec.cell.bandwidth_mhz = get_or<std::uint32_t>(c, "bandwidth_mhz", 40);
        spec.cell.scs_khz = get_or<std::uint32_t>(c, "scs_khz", 30);
        spec.cell.tdd_dl_slots = get_or<std::uint32_t>(c, "tdd_dl_slots", 7);
        spec.cell.tdd_ul_slots = get_or<std::uint32_t>(c, "tdd_ul_slots", 2);
        spec.cell.prb_count = get_or<std::uint32_t>(c, "prb_count", 106);
        spec.cell.bits_per_rb_per_slot = get_or<std::uint32_t>(c, "bits_per_rb_per_slot", 970);
        spec.cell.mimo_layers = get_or<std::uint32_t>(c, "mimo_layers", 1);
    }
    if (j.contains("path")) {
        const Json& p = j.at("path");
        require_keys(p, {"downlink_oneway_us", "uplink_oneway_us"}, "scenario.path");
        spec.path.downlink_oneway_us = get_or<TimeUs>(p, "downlink_oneway_us", 1000);
        spec.path.uplink_oneway_us = get_or<TimeUs>(p, "uplink_oneway_us", 1000);
    }
    if (j.contains("sessions")) {
        for (const auto& sj : j.at("sessions")) {
            require_keys(sj, {"session_id", "ue_id", "rules", "drb_map"}, "scenario.sessions");
            SessionConfig s;
            s.session_id = get_req<SessionId>(sj, "session_id", "scenario.sessions");
            s.ue_id = get_req<UeId>(sj, "ue_id", "scenario.sessions");
            s.rules = rule_set_from_json(sj.at("rules"), "scenario.sessions.rules");
            if (sj.contains("drb_map")) {
                for (const auto& [k, v] : sj.at("drb_map").items()) {
                    s.drb_map[QueueId(std::stoul(k))] = v.get<DrbId>();
                }
            }
            spec.sessions.push_back(std::move(s));
        }
    }
    if (j.contains("sources")) {
        for (const auto& sj : j.at("sources")) {
            spec.sources.push_back(source_from_json(sj, "scenario.sources"));
        }
    }
    if (j.contains("updates")) {
        for (const auto& uj : j.at("updates")) {
            spec.updates.push_back(control_update_from_json(uj, "scenario.updates"));
        }
    }
    return spec;
}

ScenarioSpec parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioParseError("cannot open scenario file: " + path);
    }
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioParseError("parse error in " + path + ": " + e.what());
    }
    ScenarioSpec spec = scenario_from_json(j);
    const auto problems = validate_scenario(spec);
    if (!problems.empty()) {
        std::string msg = "scenario " + path + " failed validation:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ScenarioParseError(msg);
    }
    return spec;
}

// ------------------------------------------------------------ path fits

Json fitted_config_to_json(const FittedPathConfig& fit) {
    Json scenarios = Json::object();
    for (const auto& [name, legs] : fit.scenarios) {
        Json arr = Json::array();
        for (const auto& leg : legs) {
            arr.push_back(Json{{"name", leg.name},
                               {"rtt_ms", leg.rtt_contribution_ms},
                               {"encap", leg.encap.name}});
        }
        scenarios[name] = arr;
    }
    return Json{{"scenarios", scenarios}};
}

FittedPathConfig fitted_config_from_json(const Json& j) {
    require_keys(j, {"scenarios"}, "fitted_paths");
    FittedPathConfig fit;
    for (const auto& [name, legs] : j.at("scenarios").items()) {
        std::vector<PathLeg> parsed;
        for (const auto& lj : legs) {
            require_keys(lj, {"name", "rtt_ms", "encap"}, "fitted_paths." + name);
            PathLeg leg;
            leg.name = get_req<std::string>(lj, "name", name);
            leg.rtt_contribution_ms = get_req<double>(lj, "rtt_ms", name);
            leg.encap = EncapStack::by_name(get_req<std::string>(lj, "encap", name));
            parsed.push_back(std::move(leg));
        }
        fit.scenarios[name] = std::move(parsed);
    }
    return fit;
}

FittedPathConfig parse_fitted_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioParseError("cannot open fitted path config: " + path);
    }
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioParseError("parse error in " + path + ": " + e.what());
    }
    return fitted_config_from_json(j);
}

// -------------------------------------------------------------- reports

Json report_summary_json(const RunReport& report) {
    Json j = Json::object();
    j["scenario"] = report.scenario;
    j["seed"] = report.seed;
    j["duration_s"] = round2(double(report.duration_us) / 1e6);
    j["settle_s"] = round2(double(report.settle_us) / 1e6);
    j["phases"] = Json::array();
    for (const auto& ph : report.phases) {
        Json pj = Json::object();
        pj["start_s"] = round2(double(ph.start_us) / 1e6);
        pj["end_s"] = round2(double(ph.end_us) / 1e6);
        pj["unused_rbs"] = ph.unused_rbs;
        pj["dl_slots"] = ph.dl_slots;
        pj["flows"] = Json::array();
        for (const auto& f : ph.flows) {
            pj["flows"].push_back(Json{{"flow_id", f.flow_id},
                                       {"ue_id", f.ue_id},
                                       {"mean_throughput_mbps",
                                        round2(f.mean_throughput_bps / 1e6)},
                                       {"p50_latency_ms", round2(f.p50_latency_ms)},
                                       {"p99_latency_ms", round2(f.p99_latency_ms)},
                                       {"delivered", f.delivered}});
        }
        pj["ues"] = Json::array();
        for (const auto& u : ph.ues) {
            pj["ues"].push_back(Json{{"ue_id", u.ue_id},
                                     {"rbs_used", u.rbs_used},
                                     {"mean_rlc_bytes", std::llround(u.mean_rlc_bytes)}});
        }
        j["phases"].push_back(pj);
    }
    j["totals"] = Json{{"emitted", report.emitted},
                       {"delivered", report.delivered},
                       {"drops",
                        Json{{"classifier", report.drops.classifier},
                             {"policer", report.drops.policer},
                             {"queue_tail", report.drops.queue_tail},
                             {"codel", report.drops.codel}}},
                       {"conservation_ok", report.conservation_ok}};
    return j;
}

std::string report_timeseries_csv(const RunReport& report) {
    std::ostringstream os;
    os << "t_s,flow_id,throughput_bps,p50_latency_ms,p99_latency_ms,ue_id,rbs_used,"
          "rbs_unused,rlc_bytes\n";
    for (const auto& row : report.windows) {
        os << fixed2(double(row.t_start) / 1e6) << ',' << row.flow_id << ','
           << std::llround(row.throughput_bps) << ',' << fixed2(row.p50_latency_ms) << ','
           << fixed2(row.p99_latency_ms) << ',' << row.ue_id << ',' << row.rbs_used << ','
           << row.rbs_unused << ',' << std::llround(row.rlc_bytes) << '\n';
    }
    return os.str();
}

std::vector<std::string> emit_report(const RunReport& report, const OutputConfig& config) {
    namespace fs = std::filesystem;
    std::vector<std::string> manifest;
    fs::create_directories(config.out_dir);
    if (config.format != OutputConfig::Format::Csv) {
        const auto path = (fs::path(config.out_dir) / "summary.json").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << report_summary_json(report).dump(2) << '\n';
        manifest.push_back(path);
    }
    if (config.format != OutputConfig::Format::Json) {
        const auto path = (fs::path(config.out_dir) / "timeseries.csv").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << report_timeseries_csv(report);
        manifest.push_back(path);
    }
    return manifest;
}

}  // namespace iup
