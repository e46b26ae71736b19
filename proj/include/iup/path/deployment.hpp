#ifndef IUP_PATH_DEPLOYMENT_HPP
#define IUP_PATH_DEPLOYMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iup/core/types.hpp"

namespace iup {

struct EncapHeader {
    std::string name;
    std::uint32_t bytes = 0;
};

// A per-leg tunnel/encapsulation header stack.
struct EncapStack {
    std::string name = "PlainIP";
    std::vector<EncapHeader> headers;

    std::uint32_t total_bytes() const;
    bool is_gtp() const;

    static EncapStack plain_ip();
    // Outer IPv4 20 + UDP 8 + GTP-U 8 = 36 bytes.
    static EncapStack gtp_v4();
    // Outer IPv6 40 + UDP 8 + GTP-U 8 + 8-byte extension = 64 bytes.
    static EncapStack gtp_v6_ext();
    static EncapStack by_name(const std::string& name);
};

std::uint64_t encapsulated_size(std::uint64_t payload_bytes, const EncapStack& stack);

// Fraction of on-wire bytes that are tunnel overhead.
double overhead_ratio(std::uint64_t payload_bytes, const EncapStack& stack);

struct PathLeg {
    std::string name;
    double rtt_contribution_ms = 0.0;
    EncapStack encap;
};

struct DeploymentPath {
    std::string scenario;
    std::vector<PathLeg> legs;
    bool idfc_enabled = true;  // false in N3 compatibility mode (SDAP mapping)

    int gtp_leg_count() const;
    // Tunnel bytes added to one packet over the whole path.
    std::uint64_t tunnel_bytes_per_packet() const;
};

double compose_rtt(const std::vector<PathLeg>& legs);

enum class DeployScenario {
    LocalFiveG,
    CloudFiveG,
    CloudIUP,
    WifiConverged,
    RoamingHomeRouted5G,
    RoamingIUP,
    CompatN3,
    CompatN9,
};

const char* to_string(DeployScenario s);
DeployScenario deploy_scenario_from_string(const std::string& name);

// Per-scenario leg delays, fitted to the measured endpoint RTTs.
struct FittedPathConfig {
    std::map<std::string, std::vector<PathLeg>> scenarios;
};

// Shipped fit: radio access legs 18.25 ms (from the decomposed converged
// experiment), long-N3 traversals 22.745 ms each, local IUP routing 3.08 ms.
FittedPathConfig default_fitted_config();

DeploymentPath build_deployment_path(DeployScenario scenario, const FittedPathConfig& fit);

struct PathComparison {
    double rtt_delta_ms = 0.0;                 // a - b
    std::int64_t overhead_delta_bytes = 0;     // per-packet tunnel bytes, a - b
    int gtp_leg_delta = 0;                     // a - b
    double rtt_saving_fraction = 0.0;          // (a - b) / a when a > 0
};

PathComparison compare_paths(const DeploymentPath& a, const DeploymentPath& b,
                             std::uint64_t payload_bytes);

}  // namespace iup

#endif
