#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iup/control/handover.hpp"
#include "iup/io/json_io.hpp"
#include "iup/path/deployment.hpp"
#include "iup/sim/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::int64_t seed_override, const std::string& format) {
    iup::ScenarioSpec spec = iup::parse_scenario(scenario_path);
    if (seed_override >= 0) spec.seed = std::uint64_t(seed_override);

    iup::OutputConfig out;
    out.out_dir = out_dir;
    if (format == "json") {
        out.format = iup::OutputConfig::Format::Json;
    } else if (format == "csv") {
        out.format = iup::OutputConfig::Format::Csv;
    } else {
        out.format = iup::OutputConfig::Format::Both;
    }

    std::cerr << "running scenario '" << spec.name << "' for "
              << double(spec.duration_us) / 1e6 << " s (seed " << spec.seed << ")\n";
    iup::RunReport report = iup::run_scenario(spec);
    const auto manifest = iup::emit_report(report, out);

    for (const auto& ph : report.phases) {
        std::cout << "phase [" << fixed2(double(ph.start_us) / 1e6) << ", "
                  << fixed2(double(ph.end_us) / 1e6) << ") s";
        std::cout << "  unused_rbs=" << ph.unused_rbs << "\n";
        for (const auto& f : ph.flows) {
            std::cout << "  flow " << f.flow_id << " (ue " << f.ue_id
                      << "): " << fixed2(f.mean_throughput_bps / 1e6) << " Mbps, p50 "
                      << fixed2(f.p50_latency_ms) << " ms, p99 " << fixed2(f.p99_latency_ms)
                      << " ms\n";
        }
    }
    if (!report.conservation_ok) {
        std::cerr << "packet conservation audit FAILED\n";
        return kExitRuntime;
    }
    for (const auto& path : manifest) std::cerr << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_overhead(std::uint64_t payload, const std::string& stack_name,
                 const std::string& format) {
    std::vector<iup::EncapStack> stacks;
    if (stack_name.empty()) {
        stacks = {iup::EncapStack::plain_ip(), iup::EncapStack::gtp_v4(),
                  iup::EncapStack::gtp_v6_ext()};
    } else {
        stacks = {iup::EncapStack::by_name(stack_name)};
    }
    if (format == "json") {
        iup::Json arr = iup::Json::array();
        for (const auto& s : stacks) {
            arr.push_back(iup::Json{{"stack", s.name},
                                    {"payload_bytes", payload},
                                    {"total_bytes", iup::encapsulated_size(payload, s)},
                                    {"overhead_bytes", s.total_bytes()},
                                    {"overhead_ratio", iup::overhead_ratio(payload, s)}});
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << "stack,total_bytes,overhead_ratio\n";
        for (const auto& s : stacks) {
            std::cout << s.name << ',' << iup::encapsulated_size(payload, s) << ','
                      << fixed2(iup::overhead_ratio(payload, s)) << "\n";
        }
    }
    return kExitOk;
}

int cmd_rtt(const std::string& scenario_name, const std::string& paths_file,
            bool verbose) {
    const iup::FittedPathConfig fit = paths_file.empty()
                                          ? iup::default_fitted_config()
                                          : iup::parse_fitted_config(paths_file);
    const auto scenario = iup::deploy_scenario_from_string(scenario_name);
    const auto path = iup::build_deployment_path(scenario, fit);
    if (verbose) {
        for (const auto& leg : path.legs) {
            std::cout << leg.name << ": " << fixed2(leg.rtt_contribution_ms) << " ms ("
                      << leg.encap.name << ")\n";
        }
        std::cout << "gtp legs: " << path.gtp_leg_count() << "\n";
    }
    std::cout << fixed2(iup::compose_rtt(path.legs)) << "\n";
    return kExitOk;
}

int cmd_mobility(const std::string& mode, const std::string& kind) {
    iup::Json j = iup::Json::object();
    if (kind == "handover") {
        const auto m = mode == "5g" ? iup::HandoverMode::FiveG_UpfRealloc
                                    : iup::HandoverMode::IUP_PeerToPeer;
        const auto plan = mode == "5g"
                              ? iup::plan_handover("source-gnb", "target-gnb", m)
                              : iup::plan_handover("source-iup", "target-iup", m);
        j["kind"] = "handover";
        j["mode"] = to_string(plan.mode);
        j["forwarding_legs"] = iup::Json::array();
        for (const auto& leg : plan.forwarding_legs) {
            j["forwarding_legs"].push_back(iup::Json{
                {"name", leg.name}, {"encap", leg.encap.name},
                {"tunnel_bytes", leg.encap.total_bytes()}});
        }
        j["gtp_leg_count"] = plan.gtp_leg_count();
        j["tunnel_bytes_per_packet"] = plan.tunnel_bytes_per_packet();
    } else {
        const auto fit = iup::default_fitted_config();
        const auto scenario = mode == "5g" ? iup::DeployScenario::RoamingHomeRouted5G
                                           : iup::DeployScenario::RoamingIUP;
        const auto path = iup::build_deployment_path(scenario, fit);
        const auto other =
            iup::build_deployment_path(mode == "5g" ? iup::DeployScenario::RoamingIUP
                                                    : iup::DeployScenario::RoamingHomeRouted5G,
                                       fit);
        j["kind"] = "roaming";
        j["scenario"] = path.scenario;
        j["rtt_ms"] = iup::compose_rtt(path.legs);
        j["gtp_leg_count"] = path.gtp_leg_count();
        j["tunnel_bytes_per_packet"] = path.tunnel_bytes_per_packet();
        j["legs"] = iup::Json::array();
        for (const auto& leg : path.legs) {
            j["legs"].push_back(iup::Json{{"name", leg.name},
                                          {"rtt_ms", leg.rtt_contribution_ms},
                                          {"encap", leg.encap.name}});
        }
        const auto cmp = iup::compare_paths(path, other, 60);
        j["vs_other_mode"] = iup::Json{{"rtt_delta_ms", cmp.rtt_delta_ms},
                                       {"overhead_delta_bytes", cmp.overhead_delta_bytes},
                                       {"gtp_leg_delta", cmp.gtp_leg_delta}};
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    iup::ScenarioSpec spec = iup::parse_scenario(scenario_path);
    std::cout << "OK: " << spec.name << " (" << spec.sessions.size() << " sessions, "
              << spec.sources.size() << " flows, " << spec.updates.size() << " updates)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"programmable user-plane simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario file and write reports");
    std::string scenario_path, out_dir = "out", format = "both";
    std::int64_t seed_override = -1;
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--format", format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));

    auto* overhead = app.add_subcommand("overhead", "per-packet encapsulation overhead");
    std::uint64_t payload = 60;
    std::string stack_name, overhead_format = "csv";
    overhead->add_option("--payload", payload, "payload bytes")->required();
    overhead->add_option("--stack", stack_name, "PlainIP|GtpV4|GtpV6Ext (default: all)");
    overhead->add_option("--format", overhead_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* rtt = app.add_subcommand("rtt", "compose a deployment path RTT");
    std::string scenario_name, paths_file;
    bool verbose = false;
    rtt->add_option("--scenario-name", scenario_name,
                    "local_5g|cloud_5g|cloud_iup|wifi_converged|roaming_home_routed_5g|"
                    "roaming_iup|compat_n3|compat_n9")
        ->required();
    rtt->add_option("--paths", paths_file, "fitted path config JSON (default: built-in)");
    rtt->add_flag("--verbose", verbose, "print per-leg contributions");

    auto* mobility = app.add_subcommand("mobility", "handover/roaming path comparison");
    std::string mode, kind;
    mobility->add_option("--mode", mode, "5g|iup")
        ->required()
        ->check(CLI::IsMember({"5g", "iup"}));
    mobility->add_option("--kind", kind, "handover|roaming")
        ->required()
        ->check(CLI::IsMember({"handover", "roaming"}));

    auto* validate = app.add_subcommand("validate", "validate a scenario file");
    std::string validate_path;
    validate->add_option("--scenario", validate_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return cmd_run(scenario_path, out_dir, seed_override, format);
        if (*overhead) return cmd_overhead(payload, stack_name, overhead_format);
        if (*rtt) return cmd_rtt(scenario_name, paths_file, verbose);
        if (*mobility) return cmd_mobility(mode, kind);
        if (*validate) return cmd_validate(validate_path);
    } catch (const iup::ScenarioParseError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const iup::SessionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
