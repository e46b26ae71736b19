#ifndef IUP_SIM_SIMULATION_HPP
#define IUP_SIM_SIMULATION_HPP

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <vector>

#include "iup/control/session.hpp"
#include "iup/core/types.hpp"
#include "iup/mac/scheduler.hpp"
#include "iup/pipeline/pipeline.hpp"
#include "iup/sim/engine.hpp"
#include "iup/sim/metrics.hpp"
#include "iup/sim/scenario.hpp"
#include "iup/sim/source.hpp"

namespace iup {

// Wires sources -> IDFC pipeline -> RLC -> MAC -> delivery and collects
// per-window and per-phase metrics. One instance = one run; deterministic
// for a fixed (scenario, seed).
class Simulation {
  public:
    explicit Simulation(ScenarioSpec spec);

    RunReport run();

    // Submits a runtime control update (authority and timing checked here).
    // Engine-thread only.
    void submit_update(const ControlUpdate& update);

    // Cross-thread submission: authority is checked immediately, the update
    // crosses into the engine through a mutex-guarded inbox drained at slot
    // boundaries. An apply time the engine has already passed by then takes
    // effect at the drain boundary.
    void post_update(const ControlUpdate& update);

    // Releases a session mid-run; flushes its queues.
    struct ReleaseSummary {
        SessionId session_id = 0;
        IpAddr freed_ip;
        std::uint64_t flushed_packets = 0;
    };
    ReleaseSummary release_session(SessionId id);

    Engine& engine() { return engine_; }
    SessionTable& sessions() { return table_; }
    Pipeline* pipeline(SessionId id);

  private:
    struct FlowState {
        SourceConfig cfg;
        // AIMD runtime
        AimdWindow window;
        std::int64_t inflight_payload = 0;
        std::uint64_t next_seq = 0;
        std::set<std::uint64_t> outstanding;
        std::set<std::uint64_t> loss_pending;
        TimeUs recovery_until = 0;
        // accounting
        std::uint64_t emitted = 0;
        std::uint64_t delivered = 0;
        std::uint64_t delivered_bits_window = 0;
        std::uint64_t delivered_bits_phase = 0;
        std::uint64_t delivered_phase = 0;
        DropCounts drops;
        std::int64_t in_transit = 0;  // emitted but not yet in a queue/delivered
        std::vector<float> window_latency_ms;
        std::vector<float> phase_latency_ms;
    };

    struct SessionState {
        SessionId sid = 0;
        std::unique_ptr<Pipeline> pipeline;
        std::map<DrbId, RlcQueue> rlcs;  // keyed by session-local DRB id
        UeId ue_id = 0;
        TimeUs next_service_wake = kNever;
    };

    void build();
    void start_sources();
    void emit_packet(FlowState& f);
    void try_emit(FlowState& f);
    void on_arrival(FlowState& f, PacketRecord pkt);
    void on_ack(FlowState& f, std::uint64_t seq);
    void finalize_loss(FlowState& f, std::uint64_t seq);
    void service_pipeline(SessionId sid);
    void schedule_service(SessionId sid, TimeUs at);
    void rlc_push(SessionState& ss, DrbId drb, PacketRecord pkt);
    void on_slot_tick(std::int64_t slot_index);
    void on_measure_tick();
    void apply_update(const ControlUpdate& update);
    void drain_inbox();
    void record_drop(FlowState& f, DropCause cause);
    void record_codel_drops(std::vector<PacketRecord>& drops);
    SchedulingMode current_mode() const;
    bool audit_conservation();
    void finish_phase(std::size_t phase_idx);
    FlowState* flow_by_id(FlowId id);

    ScenarioSpec spec_;
    Engine engine_;
    SessionTable table_;
    std::unique_ptr<MacScheduler> mac_;
    std::map<SessionId, SessionState> states_;
    std::vector<FlowState> flows_;
    std::mt19937_64 rng_;

    TimeUs slot_us_ = 500;
    std::vector<AllocationMap> window_allocs_;
    std::vector<TimeUs> phase_bounds_;
    std::size_t current_phase_ = 0;
    RunReport report_;

    // per-phase accumulation
    std::map<UeId, std::uint64_t> phase_rbs_used_;
    std::uint64_t phase_unused_rbs_ = 0;
    std::uint64_t phase_dl_slots_ = 0;
    std::map<UeId, double> phase_rlc_byte_sum_;
    std::map<UeId, std::uint64_t> phase_rlc_samples_;

    // window accumulation (RB/RLC via window_allocs_)
    TimeUs window_start_ = 0;

    std::uint64_t packet_counter_ = 0;
    bool conservation_ok_ = true;

    std::mutex inbox_mutex_;
    std::vector<ControlUpdate> inbox_;
};

RunReport run_scenario(const ScenarioSpec& spec);

}  // namespace iup

#endif
