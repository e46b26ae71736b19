#include "iup/path/deployment.hpp"

#include <numeric>
#include <stdexcept>

namespace iup {

std::uint32_t EncapStack::total_bytes() const {
    std::uint32_t total = 0;
    for (const auto& h : headers) total += h.bytes;
    return total;
}

bool EncapStack::is_gtp() const {
    for (const auto& h : headers) {
        if (h.name == "GTP-U") return true;
    }
    return false;
}

EncapStack EncapStack::plain_ip() { return {"PlainIP", {}}; }

EncapStack EncapStack::gtp_v4() {
    return {"GtpV4", {{"outer IPv4", 20}, {"UDP", 8}, {"GTP-U", 8}}};
}

EncapStack EncapStack::gtp_v6_ext() {
    return {"GtpV6Ext", {{"outer IPv6", 40}, {"UDP", 8}, {"GTP-U", 8}, {"extension", 8}}};
}

EncapStack EncapStack::by_name(const std::string& name) {
    if (name == "PlainIP" || name == "plain_ip") return plain_ip();
    if (name == "GtpV4" || name == "gtp_v4") return gtp_v4();
    if (name == "GtpV6Ext" || name == "gtp_v6_ext") return gtp_v6_ext();
    throw std::invalid_argument("unknown encap stack: " + name);
}

std::uint64_t encapsulated_size(std::uint64_t payload_bytes, const EncapStack& stack) {
    return payload_bytes + stack.total_bytes();
}

double overhead_ratio(std::uint64_t payload_bytes, const EncapStack& stack) {
    const std::uint64_t total = encapsulated_size(payload_bytes, stack);
    if (total == 0) throw std::invalid_argument("overhead_ratio: empty packet");
    return double(stack.total_bytes()) / double(total);
}

int DeploymentPath::gtp_leg_count() const {
    int n = 0;
    for (const auto& leg : legs) n += leg.encap.is_gtp() ? 1 : 0;
    return n;
}

std::uint64_t DeploymentPath::tunnel_bytes_per_packet() const {
    std::uint64_t total = 0;
    for (const auto& leg : legs) total += leg.encap.total_bytes();
    return total;
}

double compose_rtt(const std::vector<PathLeg>& legs) {
    if (legs.empty()) throw std::invalid_argument("compose_rtt: no legs");
    double total = 0.0;
    for (const auto& leg : legs) total += leg.rtt_contribution_ms;
    return total;
}

const char* to_string(DeployScenario s) {
    switch (s) {
        case DeployScenario::LocalFiveG: return "local_5g";
        case DeployScenario::CloudFiveG: return "cloud_5g";
        case DeployScenario::CloudIUP: return "cloud_iup";
        case DeployScenario::WifiConverged: return "wifi_converged";
        case DeployScenario::RoamingHomeRouted5G: return "roaming_home_routed_5g";
        case DeployScenario::RoamingIUP: return "roaming_iup";
        case DeployScenario::CompatN3: return "compat_n3";
        case DeployScenario::CompatN9: return "compat_n9";
    }
    return "unknown";
}

DeployScenario deploy_scenario_from_string(const std::string& name) {
    for (DeployScenario s :
         {DeployScenario::LocalFiveG, DeployScenario::CloudFiveG, DeployScenario::CloudIUP,
          DeployScenario::WifiConverged, DeployScenario::RoamingHomeRouted5G,
          DeployScenario::RoamingIUP, DeployScenario::CompatN3, DeployScenario::CompatN9}) {
        if (name == to_string(s)) return s;
    }
    throw std::invalid_argument("unknown deployment scenario: " + name);
}

FittedPathConfig default_fitted_config() {
    const auto plain = EncapStack::plain_ip();
    const auto gtp4 = EncapStack::gtp_v4();
    const auto gtp6 = EncapStack::gtp_v6_ext();

    FittedPathConfig fit;
    fit.scenarios["local_5g"] = {
        {"ue1 radio access", 18.25, plain},
        {"gnb to local upf (short n3)", 1.7, gtp4},
        {"local upf to gnb (short n3)", 1.7, gtp4},
        {"ue2 radio access", 18.25, plain},
    };
    fit.scenarios["cloud_5g"] = {
        {"ue1 radio access", 18.25, plain},
        {"gnb to cloud upf (long n3)", 22.745, gtp4},
        {"cloud upf to gnb (long n3)", 22.745, gtp4},
        {"ue2 radio access", 18.25, plain},
    };
    fit.scenarios["cloud_iup"] = {
        {"ue1 radio access", 18.25, plain},
        {"iup local routing", 3.08, plain},
        {"ue2 radio access", 18.25, plain},
    };
    fit.scenarios["wifi_converged"] = {
        {"ue1 radio access", 18.25, plain},
        {"iup to wifi ap", 1.07, plain},
        {"wifi ap to ue2", 23.25, plain},
    };
    fit.scenarios["roaming_home_routed_5g"] = {
        {"ue radio access (vplmn)", 18.25, plain},
        {"vplmn gnb to v-upf (n3)", 2.0, gtp4},
        {"v-upf to h-upf (n9)", 25.0, gtp6},
        {"h-upf to application server", 1.0, plain},
    };
    fit.scenarios["roaming_iup"] = {
        {"ue radio access (vplmn)", 18.25, plain},
        {"iup to application server (inter-plmn ip)", 25.0, plain},
    };
    fit.scenarios["compat_n3"] = {
        {"application server to upf", 1.0, plain},
        {"upf to iup (n3)", 2.0, gtp4},
        {"ue radio access", 18.25, plain},
    };
    fit.scenarios["compat_n9"] = {
        {"application server to upf", 1.0, plain},
        {"upf to iup (n9, iup as i-upf)", 2.0, gtp4},
        {"ue radio access", 18.25, plain},
    };
    return fit;
}

DeploymentPath build_deployment_path(DeployScenario scenario, const FittedPathConfig& fit) {
    const std::string name = to_string(scenario);
    auto it = fit.scenarios.find(name);
    if (it == fit.scenarios.end() || it->second.empty()) {
        throw std::invalid_argument("fitted config has no legs for scenario: " + name);
    }
    DeploymentPath path;
    path.scenario = name;
    path.legs = it->second;
    path.idfc_enabled = scenario != DeployScenario::CompatN3;
    return path;
}

PathComparison compare_paths(const DeploymentPath& a, const DeploymentPath& b,
                             std::uint64_t payload_bytes) {
    (void)payload_bytes;  // per-packet overhead is payload-independent for
                          // fixed stacks; kept for report symmetry
    PathComparison c;
    const double rtt_a = compose_rtt(a.legs);
    const double rtt_b = compose_rtt(b.legs);
    c.rtt_delta_ms = rtt_a - rtt_b;
    c.overhead_delta_bytes = std::int64_t(a.tunnel_bytes_per_packet()) -
                             std::int64_t(b.tunnel_bytes_per_packet());
    c.gtp_leg_delta = a.gtp_leg_count() - b.gtp_leg_count();
    c.rtt_saving_fraction = rtt_a > 0.0 ? (rtt_a - rtt_b) / rtt_a : 0.0;
    return c;
}

}  // namespace iup
