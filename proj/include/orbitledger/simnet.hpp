#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitledger/consensus.hpp"
#include "orbitledger/constellation.hpp"
#include "orbitledger/ledger.hpp"

namespace orbitledger::sim {

// Verifier/approver/shared split for one network size. Shared nodes are
// counted in both role populations, hence verifiers + approvers - shared
// equals the total.
struct RoleAssignment {
    unsigned total = 0;
    unsigned verifiers = 0;
    unsigned approvers = 0;
    unsigned shared = 0;

    void validate() const;
};

// Preset rows for the benchmarked sizes 15..50; 30%/20% rounding formula
// for everything else (or for everything, when use_table_presets is off).
// Needs at least 5 nodes so every role is populated.
RoleAssignment assign_roles(unsigned total, bool use_table_presets = true);

// Calibration knobs for the timing model. These supply durations only; all
// consensus artifacts come from the real protocol implementation.
struct CostModel {
    double contribution_compute_ms = 4.0;  // per Lagrange factor of one c_k/d_k
    double point_add_ms = 0.05;            // per group addition
    double hash_ms_per_kb = 4.0;
    double per_message_overhead_ms = 0.6;  // per send/receive handled
    double bandwidth_kbps = 2000.0;        // 1024-byte buffers on the wire
    double proposer_assembly_ms = 150.0;

    void validate() const;
    // Serialize-and-transmit cost of one fixed-size message buffer.
    double message_ms() const { return per_message_overhead_ms + 8.0 * 1024.0 / bandwidth_kbps; }
};

// Host-contention profile, indexed by per-round active load (participating
// approvers + verifiers, shared nodes counted twice). Piecewise-linear and
// monotone; busy_scale stretches serialized work, extra_wait adds the
// scheduler wait a saturated host tacks onto every round.
struct ContentionProfile {
    std::vector<double> load_knots;
    std::vector<double> busy_scale;
    std::vector<double> extra_wait_ms;

    double busy_scale_at(double load) const;
    double extra_wait_ms_at(double load) const;
    void validate() const;

    static ContentionProfile none();
};

struct CalibratedCostModel {
    int version = 1;
    CostModel cost;
    ContentionProfile contention;

    // Constants fitted against the benchmark series; kept in sync with
    // data/cost_model_default.json.
    static CalibratedCostModel defaults();
    static CalibratedCostModel load(const std::filesystem::path& path);
    std::string to_json() const;
};

enum class Mode : std::uint8_t { selective = 0, full = 1 };

const char* to_string(Mode mode);

enum class EventKind : std::uint8_t {
    tx_arrival = 0,
    broadcast_done = 1,
    contribution_ready = 2,
    approval_assembled = 3,
    verification_done = 4,
    block_committed = 5,
};

struct SimEvent {
    double fire_at_ms = 0.0;
    EventKind kind = EventKind::tx_arrival;
    std::uint32_t round = 0;
    std::uint64_t sequence = 0; // tie-break, assigned at scheduling time
};

struct RoundMetrics {
    std::uint32_t round = 0;
    double launch_ms = 0.0;
    double commit_ms = 0.0;
    double response_s = 0.0;
    std::size_t tx_count = 0;
    unsigned verification_attempts = 1;
};

struct MetricsReport {
    Mode mode = Mode::selective;
    unsigned nodes = 0;
    std::uint64_t seed = 0;
    double throughput_tx_per_s = 0.0;
    double response_time_s = 0.0; // mean over rounds
    double t_blockchain_s = 0.0;  // worst round, gate for the 120 s window
    std::size_t committed_tx = 0;
    std::size_t rounds = 0;
};

struct SimulationConfig {
    constellation::WalkerPattern pattern = constellation::WalkerPattern::star;
    Mode mode = Mode::selective;
    bool roles_from_table = true;     // Table presets vs pure formula
    unsigned threshold_override = 0;  // 0: every approver participates
    unsigned verifier_override = 0;   // 0: minimum subset (= t) per round
    unsigned retry_limit = 3;
    std::size_t batch_size = ledger::kDefaultBatchSize;
    std::size_t tx_bytes = ledger::kTransactionBytes;
    std::uint64_t group_order = 2305843009213693951ULL; // 2^61 - 1
    bool use_latency_presets = true;
};

struct ExperimentResult {
    MetricsReport report;
    std::vector<RoundMetrics> round_metrics;
    std::string chain_head_digest; // hex, for determinism checks
};

// One network: topology, role assignment, dealt key shares, mempool, chain,
// and the discrete-event engine that walks consensus rounds through the
// cost model. Proposals are admission-paced at the steady-state bottleneck
// rate so consecutive rounds pipeline without unbounded queue growth.
class NetworkSimulation {
  public:
    NetworkSimulation(unsigned total_nodes, const SimulationConfig& config, const CalibratedCostModel& costs,
                      std::uint64_t seed);
    ~NetworkSimulation();

    NetworkSimulation(const NetworkSimulation&) = delete;
    NetworkSimulation& operator=(const NetworkSimulation&) = delete;

    ExperimentResult run(unsigned rounds);

    const ledger::Chain& chain() const;
    const RoleAssignment& roles() const;
    const constellation::TopologyGraph& topology() const;
    std::size_t threshold() const;
    std::size_t verifiers_per_round() const;
    double bottleneck_interval_ms() const;
    double active_load() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

MetricsReport run_single(unsigned total_nodes, const SimulationConfig& config, const CalibratedCostModel& costs,
                         std::uint64_t seed, unsigned rounds = 20);

std::vector<MetricsReport> run_experiment(std::span<const unsigned> node_counts, Mode mode,
                                          const SimulationConfig& base, const CalibratedCostModel& costs,
                                          std::span<const std::uint64_t> seeds, unsigned rounds = 20);

struct ConstraintReport {
    bool pass = true;
    std::vector<std::string> violations;
};

// Operational constraints: at most 24 satellites, and the full blockchain
// round inside the 120-second measurement window.
ConstraintReport check_constraints(unsigned n, double t_blockchain_s);

inline constexpr unsigned kMaxSatellites = 24;
inline constexpr double kMeasurementWindowS = 120.0;

struct CycleReport {
    unsigned nodes = 0;
    std::size_t observations = 0;
    std::size_t committed = 0;
    unsigned blocks = 0;
    double window_s = kMeasurementWindowS;
    double commit_time_s = 0.0;
    double slack_s = 0.0;
};

// One measurement window: every satellite emits an observation at t=0, the
// network commits them, and the report states how much of the window was
// left. Throws WindowOverrunError when the commit lands past the window.
CycleReport tracking_cycle(unsigned total_nodes, const SimulationConfig& config, const CalibratedCostModel& costs,
                           std::uint64_t seed, double window_s = kMeasurementWindowS);

} // namespace orbitledger::sim
