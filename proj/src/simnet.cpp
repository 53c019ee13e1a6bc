#include "orbitledger/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "orbitledger/errors.hpp"
#include "orbitledger/rng.hpp"
#include "orbitledger/wire.hpp"

namespace orbitledger::sim {

using constellation::ShortestPaths;
using constellation::TopologyGraph;
using ledger::Block;
using ledger::Chain;
using ledger::DebrisObservation;
using ledger::Mempool;
using ledger::Transaction;
using math::GroupElement;
using math::Scalar;

void RoleAssignment::validate() const {
    if (approvers < 1 || verifiers < 1) {
        throw TooFewNodesError("role assignment must populate both roles");
    }
    if (shared > approvers || shared > verifiers) {
        throw TooFewNodesError("shared roles cannot exceed either population");
    }
    if (verifiers + approvers - shared != total) {
        throw TooFewNodesError("verifiers + approvers - shared must equal the total");
    }
}

RoleAssignment assign_roles(unsigned total, bool use_table_presets) {
    if (total < 5) {
        throw TooFewNodesError("role assignment needs at least 5 nodes, got " + std::to_string(total));
    }
    // Benchmarked splits for the canonical sweep sizes.
    static const std::map<unsigned, RoleAssignment> kPresets = {
        {15, {15, 14, 4, 3}},  {20, {20, 18, 6, 4}},  {25, {25, 22, 8, 5}},  {30, {30, 27, 9, 6}},
        {35, {35, 31, 11, 7}}, {40, {40, 36, 12, 8}}, {45, {45, 41, 13, 9}}, {50, {50, 45, 15, 10}},
    };
    if (use_table_presets) {
        if (const auto it = kPresets.find(total); it != kPresets.end()) {
            return it->second;
        }
    }
    RoleAssignment roles;
    roles.total = total;
    roles.approvers = static_cast<unsigned>(std::lround(0.30 * total));
    roles.shared = static_cast<unsigned>(std::lround(0.20 * total));
    roles.verifiers = total - roles.approvers + roles.shared;
    roles.validate();
    return roles;
}

void CostModel::validate() const {
    for (double v : {contribution_compute_ms, point_add_ms, hash_ms_per_kb, per_message_overhead_ms,
                     proposer_assembly_ms}) {
        if (!(v >= 0.0)) throw ConfigError("cost model entries must be non-negative");
    }
    if (!(bandwidth_kbps > 0.0)) throw ConfigError("bandwidth must be positive");
}

namespace {

double interpolate(const std::vector<double>& knots, const std::vector<double>& values, double x) {
    if (x <= knots.front()) return values.front();
    if (x >= knots.back()) return values.back();
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (x <= knots[i]) {
            const double f = (x - knots[i - 1]) / (knots[i] - knots[i - 1]);
            return values[i - 1] + f * (values[i] - values[i - 1]);
        }
    }
    return values.back();
}

} // namespace

double ContentionProfile::busy_scale_at(double load) const { return interpolate(load_knots, busy_scale, load); }

double ContentionProfile::extra_wait_ms_at(double load) const { return interpolate(load_knots, extra_wait_ms, load); }

void ContentionProfile::validate() const {
    if (load_knots.empty() || load_knots.size() != busy_scale.size() || load_knots.size() != extra_wait_ms.size()) {
        throw ConfigError("contention profile arrays must be non-empty and equally sized");
    }
    for (std::size_t i = 1; i < load_knots.size(); ++i) {
        if (!(load_knots[i] > load_knots[i - 1])) throw ConfigError("contention load knots must be ascending");
        if (busy_scale[i] + 1e-12 < busy_scale[i - 1] || extra_wait_ms[i] + 1e-12 < extra_wait_ms[i - 1]) {
            throw ConfigError("contention profile must be monotone non-decreasing");
        }
    }
    for (std::size_t i = 0; i < load_knots.size(); ++i) {
        if (!(busy_scale[i] > 0.0) || !(extra_wait_ms[i] >= 0.0)) {
            throw ConfigError("contention profile values out of range");
        }
    }
}

ContentionProfile ContentionProfile::none() {
    ContentionProfile p;
    p.load_knots = {0.0};
    p.busy_scale = {1.0};
    p.extra_wait_ms = {0.0};
    return p;
}

CalibratedCostModel CalibratedCostModel::defaults() {
    CalibratedCostModel m;
    m.version = 1;
    m.cost = CostModel{};
    m.contention.load_knots = {8, 16, 24, 30, 40, 60, 80, 100};
    m.contention.busy_scale = {1.0, 1.0, 1.0, 1.0, 1.3, 2.0, 3.6, 8.0};
    m.contention.extra_wait_ms = {3600, 4000, 4200, 4400, 18000, 26000, 29000, 33000};
    return m;
}

CalibratedCostModel CalibratedCostModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open cost model file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cost model file " + path.string() + ": " + e.what());
    }
    CalibratedCostModel m;
    m.version = doc.at("version").get<int>();
    const auto& c = doc.at("cost_model");
    m.cost.contribution_compute_ms = c.at("contribution_compute_ms").get<double>();
    m.cost.point_add_ms = c.at("point_add_ms").get<double>();
    m.cost.hash_ms_per_kb = c.at("hash_ms_per_kb").get<double>();
    m.cost.per_message_overhead_ms = c.at("per_message_overhead_ms").get<double>();
    m.cost.bandwidth_kbps = c.at("bandwidth_kbps").get<double>();
    m.cost.proposer_assembly_ms = c.at("proposer_assembly_ms").get<double>();
    const auto& p = doc.at("contention");
    m.contention.load_knots = p.at("load_knots").get<std::vector<double>>();
    m.contention.busy_scale = p.at("busy_scale").get<std::vector<double>>();
    m.contention.extra_wait_ms = p.at("extra_wait_ms").get<std::vector<double>>();
    m.cost.validate();
    m.contention.validate();
    return m;
}

std::string CalibratedCostModel::to_json() const {
    nlohmann::json doc;
    doc["version"] = version;
    doc["cost_model"] = {
        {"contribution_compute_ms", cost.contribution_compute_ms},
        {"point_add_ms", cost.point_add_ms},
        {"hash_ms_per_kb", cost.hash_ms_per_kb},
        {"per_message_overhead_ms", cost.per_message_overhead_ms},
        {"bandwidth_kbps", cost.bandwidth_kbps},
        {"proposer_assembly_ms", cost.proposer_assembly_ms},
    };
    doc["contention"] = {
        {"load_knots", contention.load_knots},
        {"busy_scale", contention.busy_scale},
        {"extra_wait_ms", contention.extra_wait_ms},
    };
    return doc.dump(2) + "\n";
}

const char* to_string(Mode mode) { return mode == Mode::selective ? "selective" : "full"; }

ConstraintReport check_constraints(unsigned n, double t_blockchain_s) {
    ConstraintReport report;
    if (n > kMaxSatellites) {
        report.pass = false;
        report.violations.push_back("satellite count n=" + std::to_string(n) + " exceeds N=" +
                                    std::to_string(kMaxSatellites) +
                                    "; apply network partitioning strategies to stay within the optical baseline");
    }
    std::ostringstream delay;
    if (t_blockchain_s > kMeasurementWindowS) {
        delay << "blockchain delay t=" << t_blockchain_s << " s exceeds the measurement window T=" << kMeasurementWindowS
              << " s";
        report.pass = false;
        report.violations.push_back(delay.str());
    }
    return report;
}

// ---------------------------------------------------------------------------
// Event engine

namespace {

struct EventAfter {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.fire_at_ms != b.fire_at_ms) return a.fire_at_ms > b.fire_at_ms;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        return a.sequence > b.sequence;
    }
};

} // namespace

struct NetworkSimulation::Impl {
    unsigned n;
    SimulationConfig config;
    CalibratedCostModel costs;
    std::uint64_t seed;

    RoleAssignment roles;
    TopologyGraph topo;
    ShortestPaths paths;
    std::unique_ptr<math::Group> group;
    consensus::KeygenResult keys;

    std::vector<unsigned> approver_nodes; // node indices, ascending
    std::vector<unsigned> verifier_pool;  // node indices, rotation order (seeded shuffle)
    std::size_t t = 0;                    // approvers per round
    std::size_t v = 0;                    // verifiers per round

    double load = 0.0;
    double busy_scale = 1.0;
    double extra_wait_ms = 0.0;
    double msg_ms = 0.0;
    double pace_ms = 0.0;

    Mempool pool;
    Chain chain;
    Block pending_head;

    SplitMix64 rng;
    std::size_t verifier_cursor = 0;

    struct RoundState {
        double launch_ms = 0.0;
        unsigned proposer = 0;
        std::vector<unsigned> approvers;   // node indices
        std::vector<unsigned> verifiers;   // node indices
        std::vector<Scalar> approver_ids;  // sorted scalars
        std::vector<Scalar> verifier_ids;
        Block block;
        GroupElement c_sum;
        consensus::VerifyResult verify_result = consensus::VerifyResult::valid;
        unsigned attempts = 1;
        bool committed = false;
        double commit_ms = 0.0;
    };
    std::vector<RoundState> rounds;

    std::priority_queue<SimEvent, std::vector<SimEvent>, EventAfter> queue;
    std::uint64_t next_sequence = 0;
    std::vector<double> node_free_ms;
    std::uint32_t next_commit_round = 0;
    std::vector<RoundMetrics> metrics;
    std::uint64_t tx_counter = 0;

    Impl(unsigned total_nodes, const SimulationConfig& cfg, const CalibratedCostModel& cost_model, std::uint64_t s)
        : n(total_nodes),
          config(cfg),
          costs(cost_model),
          seed(s),
          roles(cfg.mode == Mode::full ? RoleAssignment{total_nodes, total_nodes, total_nodes, total_nodes}
                                       : assign_roles(total_nodes, cfg.roles_from_table)),
          topo(constellation::build_topology_for_node_count(
              total_nodes, cfg.pattern,
              cfg.use_latency_presets ? std::optional(constellation::LatencyPresetTable::builtin()) : std::nullopt)),
          paths(constellation::compute_shortest_paths(topo)),
          group(std::make_unique<math::Group>(math::GroupDescription::mock_additive(cfg.group_order))),
          keys(consensus::keygen(total_nodes, 1, *group, s)), // re-dealt below once t is known
          pool(10 * std::max<std::size_t>(cfg.batch_size, 1)),
          chain(GroupElement{}, 1),
          rng(s ^ 0x6f72626974ULL) {
        costs.cost.validate();
        costs.contention.validate();
        roles.validate();

        // Role layout over node indices: approvers are spread evenly around
        // the constellation (consensus traffic crosses planes, as it would
        // with any realistic tasking); the last `shared` approvers also
        // belong to the verifier pool.
        approver_nodes.clear();
        std::vector<bool> is_approver(n, false);
        for (unsigned i = 0; i < roles.approvers; ++i) {
            const unsigned node = static_cast<unsigned>(static_cast<std::uint64_t>(i) * n / roles.approvers);
            approver_nodes.push_back(node);
            is_approver[node] = true;
        }
        verifier_pool.clear();
        for (unsigned i = 0; i < n; ++i) {
            if (!is_approver[i]) verifier_pool.push_back(i);
        }
        for (unsigned i = roles.approvers - roles.shared; i < roles.approvers; ++i) {
            verifier_pool.push_back(approver_nodes[i]);
        }
        rng.shuffle(verifier_pool);

        t = config.threshold_override == 0 ? approver_nodes.size()
                                           : std::min<std::size_t>(config.threshold_override, approver_nodes.size());
        if (t < 1) throw InvalidThresholdError("at least one approver is required");
        v = std::max<std::size_t>(t, config.verifier_override);
        if (v > verifier_pool.size()) {
            throw InvalidThresholdError("verifier subset of " + std::to_string(v) + " exceeds the pool of " +
                                        std::to_string(verifier_pool.size()));
        }

        load = static_cast<double>(t + v);
        busy_scale = costs.contention.busy_scale_at(load);
        extra_wait_ms = costs.contention.extra_wait_ms_at(load);
        msg_ms = costs.cost.message_ms();

        keys = consensus::keygen(n, t, *group, s);
        chain = Chain(keys.public_key, t);
        pending_head = chain.head();
        node_free_ms.assign(n, 0.0);
        pace_ms = measure_interval_ms();
    }

    // Resets all mutable run state and walks `round_count` rounds through
    // the event queue. The same entry point serves the pacing probe and the
    // real runs, so both see identical random streams.
    void run_rounds(unsigned round_count) {
        rounds.assign(round_count, RoundState{});
        metrics.clear();
        next_commit_round = 0;
        node_free_ms.assign(n, 0.0);
        verifier_cursor = 0;
        tx_counter = 0;
        rng = SplitMix64(seed ^ 0x6f72626974ULL);
        pool = Mempool(10 * std::max<std::size_t>(config.batch_size, 1));
        chain = Chain(keys.public_key, t);
        pending_head = chain.head();
        while (!queue.empty()) queue.pop();

        for (std::uint32_t r = 0; r < round_count; ++r) {
            RoundState& state = rounds[r];
            state.launch_ms = r * pace_ms;
            select_participants(state, r);
            schedule(state.launch_ms, EventKind::tx_arrival, r);
        }
        drain_events();
        if (metrics.size() != round_count) {
            throw ConsensusFailedError("simulation ended with uncommitted rounds");
        }
    }

    const consensus::KeyShare& share_of(unsigned node) const { return keys.shares[node]; }

    double reserve(unsigned node, double earliest, double raw_work_ms) {
        const double start = std::max(node_free_ms[node], earliest);
        node_free_ms[node] = start + raw_work_ms * busy_scale;
        if (work_tally != nullptr) (*work_tally)[node] += raw_work_ms * busy_scale;
        return node_free_ms[node];
    }

    double effective_latency_ms(unsigned from, unsigned to) const {
        if (from == to) return 0.0;
        const double store_forward = paths.hop_count(from, to) > 1
                                         ? (paths.hop_count(from, to) - 1) * msg_ms * busy_scale
                                         : 0.0;
        return paths.latency(from, to) + store_forward;
    }

    // Forwarding runs on the transceiver plane: it consumes per-satellite
    // capacity (counted for pacing) without serializing behind the node's
    // protocol work. The per-hop store-and-forward delay is carried by
    // effective_latency_ms instead.
    void charge_transit(unsigned from, unsigned to) {
        if (work_tally == nullptr) return;
        for (unsigned m : paths.interior_nodes(from, to)) {
            (*work_tally)[m] += msg_ms * busy_scale;
        }
    }

    // Serialized unicast fan-out from one node; returns the barrier over
    // all receive completions.
    double multicast(unsigned from, std::span<const unsigned> dests, double start, double recv_extra_ms) {
        std::vector<std::pair<double, unsigned>> arrivals;
        arrivals.reserve(dests.size());
        for (unsigned d : dests) {
            if (d == from) continue;
            const double sent = reserve(from, start, msg_ms);
            arrivals.emplace_back(sent + effective_latency_ms(from, d), d);
            charge_transit(from, d);
        }
        std::sort(arrivals.begin(), arrivals.end());
        double barrier = start;
        for (const auto& [arrival, d] : arrivals) {
            barrier = std::max(barrier, reserve(d, arrival, costs.cost.per_message_overhead_ms + recv_extra_ms));
        }
        return barrier;
    }

    double all_to_all(std::span<const unsigned> members, double start, double recv_extra_ms) {
        std::vector<std::pair<double, std::pair<unsigned, unsigned>>> arrivals;
        arrivals.reserve(members.size() * members.size());
        for (unsigned s : members) {
            for (unsigned d : members) {
                if (s == d) continue;
                const double sent = reserve(s, start, msg_ms);
                arrivals.push_back({sent + effective_latency_ms(s, d), {d, s}});
                charge_transit(s, d);
            }
        }
        std::sort(arrivals.begin(), arrivals.end());
        double barrier = start;
        for (const auto& [arrival, pair] : arrivals) {
            barrier = std::max(barrier, reserve(pair.first, arrival, costs.cost.per_message_overhead_ms + recv_extra_ms));
        }
        return barrier;
    }

    // Proposal pacing: a safe upper bound on any satellite's per-round busy
    // time, measured by driving one probe round through the event engine
    // with per-node work accounting switched on. Launching at this interval
    // keeps queues near-empty, so the response time stays the single-round
    // critical path and commits space out at the pacing interval. The
    // overshoot (the probe charges the proposer role to one node in full)
    // is absorbed by the calibrated contention profile.
    double measure_interval_ms() {
        // One full proposer rotation, so assembly and dissemination costs
        // amortize across the approver set the way they do at steady state.
        const unsigned probe_rounds = static_cast<unsigned>(approver_nodes.size());
        std::vector<double> tally(n, 0.0);
        work_tally = &tally;
        pace_ms = 0.0;
        run_rounds(probe_rounds);
        work_tally = nullptr;
        const double worst = *std::max_element(tally.begin(), tally.end()) / probe_rounds;
        // Margin for verifier-rotation hot spots drifting between rounds.
        return worst * 1.15;
    }

    void schedule(double at, EventKind kind, std::uint32_t round) {
        queue.push(SimEvent{at, kind, round, next_sequence++});
    }

    Transaction synthesize_transaction(double now_s, std::uint64_t originator) {
        DebrisObservation obs;
        obs.object_tag = rng.next();
        obs.epoch_s = now_s;
        // Random position on the debris shell, near-circular velocity.
        const double theta = rng.next_unit() * 2.0 * 3.14159265358979323846;
        const double z = 2.0 * rng.next_unit() - 1.0;
        const double r = constellation::ConstellationConfig::kEarthRadiusKm + 700.0 + 300.0 * rng.next_unit();
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        obs.position_km = {r * rho * std::cos(theta), r * rho * std::sin(theta), r * z};
        const double speed = 7.3 + 0.4 * rng.next_unit();
        obs.velocity_km_s = {-speed * std::sin(theta), speed * std::cos(theta), 0.05 * (2.0 * rng.next_unit() - 1.0)};
        obs.uncertainty_km = {0.05 + 0.2 * rng.next_unit(), 0.05 + 0.2 * rng.next_unit(), 0.05 + 0.2 * rng.next_unit()};
        return Transaction::make(obs, originator, now_s);
    }

    void feed_mempool(std::size_t count, double now_s) {
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint64_t originator = 1 + (tx_counter++ % n);
            if (!pool.submit(synthesize_transaction(now_s, originator))) {
                throw ConsensusFailedError("synthetic transaction rejected by the mempool");
            }
        }
    }

    void select_participants(RoundState& round, std::uint32_t index) {
        round.proposer = approver_nodes[index % approver_nodes.size()];
        round.approvers.clear();
        if (t == approver_nodes.size()) {
            round.approvers = approver_nodes;
        } else {
            for (std::size_t k = 0; k < t; ++k) {
                round.approvers.push_back(approver_nodes[(index + k) % approver_nodes.size()]);
            }
            if (std::find(round.approvers.begin(), round.approvers.end(), round.proposer) == round.approvers.end()) {
                round.approvers[0] = round.proposer;
            }
            std::sort(round.approvers.begin(), round.approvers.end());
        }
        resample_verifiers(round);
        round.approver_ids.clear();
        for (unsigned node : round.approvers) round.approver_ids.push_back(Scalar{node + 1});
        std::sort(round.approver_ids.begin(), round.approver_ids.end());
    }

    void resample_verifiers(RoundState& round) {
        round.verifiers.clear();
        for (std::size_t k = 0; k < v; ++k) {
            round.verifiers.push_back(verifier_pool[(verifier_cursor + k) % verifier_pool.size()]);
        }
        verifier_cursor = (verifier_cursor + v) % verifier_pool.size();
        std::sort(round.verifiers.begin(), round.verifiers.end());
        round.verifier_ids.clear();
        for (unsigned node : round.verifiers) round.verifier_ids.push_back(Scalar{node + 1});
        std::sort(round.verifier_ids.begin(), round.verifier_ids.end());
    }

    // Phase 1 and 2 of the functional flow: batch is drained from the pool
    // and the proposal with the approver roster goes out to the miners.
    void on_tx_arrival(std::uint32_t index) {
        RoundState& round = rounds[index];
        feed_mempool(config.batch_size, round.launch_ms / 1000.0);
        round.block = ledger::assemble_block(pool, pending_head, config.batch_size);
        round.block.approver_ids.clear();
        for (const Scalar& id : round.approver_ids) round.block.approver_ids.push_back(id.value);
        pending_head = round.block;

        const double batch_kb = static_cast<double>(round.block.transactions.size()) * config.tx_bytes / 1024.0;
        const double assembled =
            reserve(round.proposer, round.launch_ms, costs.cost.proposer_assembly_ms + costs.cost.hash_ms_per_kb * batch_kb);
        const double barrier = all_to_all(round.approvers, assembled, 0.0);
        schedule(barrier, EventKind::broadcast_done, index);
    }

    // Mining phase: every approver computes and releases its c_k.
    void on_broadcast_done(std::uint32_t index) {
        RoundState& round = rounds[index];
        std::vector<consensus::ApprovalContribution> contributions;
        contributions.reserve(round.approvers.size());
        double compute_done = queue_time_;
        for (unsigned node : round.approvers) {
            const double done = reserve(node, queue_time_, costs.cost.contribution_compute_ms *
                                                               std::max<std::size_t>(round.approvers.size() - 1, 1));
            compute_done = std::max(compute_done, done);
            contributions.push_back(
                consensus::compute_approval_contribution(share_of(node), round.approver_ids, *group));
        }
        for (const auto& c : contributions) {
            const auto bytes = wire::encode(wire::ContributionMessage{wire::Phase::approval, index,
                                                                      c.contributor.id.value, c.point});
            if (bytes.size() > wire::kMaxMessageBytes) {
                throw ConsensusFailedError("contribution message exceeds the 1024-byte buffer");
            }
        }

        std::vector<std::pair<double, unsigned>> arrivals;
        for (unsigned node : round.approvers) {
            if (node == round.proposer) continue;
            const double sent = reserve(node, queue_time_, msg_ms); // queues behind the c_k compute
            arrivals.emplace_back(sent + effective_latency_ms(node, round.proposer), node);
            charge_transit(node, round.proposer);
        }
        std::sort(arrivals.begin(), arrivals.end());
        double collected = compute_done;
        for (const auto& [arrival, node] : arrivals) {
            collected = std::max(collected, reserve(round.proposer, arrival, costs.cost.per_message_overhead_ms));
        }
        const double summed = reserve(round.proposer, collected,
                                      costs.cost.point_add_ms * (round.approvers.size() + 1));

        const auto outcome = consensus::assemble_approval(contributions, keys.public_key,
                                                          std::min(t, round.approvers.size()), *group);
        if (!outcome.approved) {
            throw ConsensusFailedError("approval sum diverged from the network public key");
        }
        round.c_sum = outcome.sum;
        schedule(summed, EventKind::contribution_ready, index);
    }

    // The approval result is disseminated to the round's verifier subset.
    void on_contribution_ready(std::uint32_t index) {
        RoundState& round = rounds[index];
        const auto message = wire::encode(wire::ApprovalResultMessage{index, true, round.c_sum,
                                                                      round.block.approver_ids});
        if (message.size() > wire::kMaxMessageBytes) {
            throw ConsensusFailedError("approval result exceeds the 1024-byte buffer");
        }
        const double barrier = multicast(round.proposer, round.verifiers, queue_time_, costs.cost.point_add_ms);
        schedule(barrier, EventKind::approval_assembled, index);
    }

    // Verifying phase: d_k computation, exchange, and the sum equality check.
    void on_approval_assembled(std::uint32_t index) {
        RoundState& round = rounds[index];
        double compute_done = queue_time_;
        std::vector<consensus::VerificationContribution> contributions;
        contributions.reserve(round.verifiers.size());
        for (unsigned node : round.verifiers) {
            const double done = reserve(node, queue_time_, costs.cost.contribution_compute_ms *
                                                               std::max<std::size_t>(round.verifiers.size() - 1, 1));
            compute_done = std::max(compute_done, done);
            contributions.push_back(
                consensus::compute_verification_contribution(share_of(node), round.verifier_ids, *group));
        }
        for (const auto& c : contributions) {
            const auto bytes = wire::encode(wire::ContributionMessage{wire::Phase::verification, index,
                                                                      c.contributor.id.value, c.point});
            if (bytes.size() > wire::kMaxMessageBytes) {
                throw ConsensusFailedError("contribution message exceeds the 1024-byte buffer");
            }
        }
        double barrier = all_to_all(round.verifiers, compute_done, 0.0);
        for (unsigned node : round.verifiers) {
            barrier = std::max(barrier, reserve(node, barrier, costs.cost.point_add_ms * round.verifiers.size()));
        }

        round.verify_result = consensus::verify_block(round.c_sum, contributions, keys.public_key, v, *group);
        schedule(barrier, EventKind::verification_done, index);
    }

    void on_verification_done(std::uint32_t index) {
        RoundState& round = rounds[index];
        if (round.verify_result == consensus::VerifyResult::repeat_verification) {
            if (round.attempts >= config.retry_limit) {
                throw ConsensusFailedError("verification kept failing after " + std::to_string(round.attempts) +
                                           " attempts; block rejected");
            }
            ++round.attempts;
            resample_verifiers(round);
            schedule(queue_time_, EventKind::contribution_ready, index);
            return;
        }
        // Commit: the lead verifier reports back, the proposer finalizes the
        // block and floods the decision.
        const unsigned lead = round.verifiers.front();
        const double sent = reserve(lead, queue_time_, msg_ms);
        charge_transit(lead, round.proposer);
        const double acked = reserve(round.proposer, sent + effective_latency_ms(lead, round.proposer),
                                     costs.cost.per_message_overhead_ms);
        const double batch_kb = static_cast<double>(round.block.transactions.size()) * config.tx_bytes / 1024.0;
        const double appended = reserve(round.proposer, acked,
                                        costs.cost.hash_ms_per_kb * batch_kb + 2.0 * costs.cost.point_add_ms);
        double flood = 0.0;
        for (unsigned i = 0; i < n; ++i) {
            if (i != round.proposer) flood = std::max(flood, effective_latency_ms(round.proposer, i));
        }
        schedule(appended + flood + extra_wait_ms, EventKind::block_committed, index);
    }

    void on_block_committed(std::uint32_t index) {
        RoundState& round = rounds[index];
        round.committed = true;
        round.commit_ms = queue_time_;
        while (next_commit_round < rounds.size() && rounds[next_commit_round].committed) {
            RoundState& ready = rounds[next_commit_round];
            ready.block.approval_sum = ready.c_sum;
            ready.block.verification_sum = ready.c_sum;
            const ledger::AppendResult result = chain.append(ready.block);
            if (result != ledger::AppendResult::appended) {
                throw ConsensusFailedError(std::string("chain append rejected: ") + ledger::to_string(result));
            }
            RoundMetrics m;
            m.round = next_commit_round;
            m.launch_ms = ready.launch_ms;
            m.commit_ms = ready.commit_ms;
            m.response_s = (ready.commit_ms - ready.launch_ms) / 1000.0;
            m.tx_count = ready.block.transactions.size();
            m.verification_attempts = ready.attempts;
            metrics.push_back(m);
            ++next_commit_round;
        }
    }

    void drain_events() {
        while (!queue.empty()) {
            const SimEvent event = queue.top();
            queue.pop();
            queue_time_ = event.fire_at_ms;
            switch (event.kind) {
                case EventKind::tx_arrival: on_tx_arrival(event.round); break;
                case EventKind::broadcast_done: on_broadcast_done(event.round); break;
                case EventKind::contribution_ready: on_contribution_ready(event.round); break;
                case EventKind::approval_assembled: on_approval_assembled(event.round); break;
                case EventKind::verification_done: on_verification_done(event.round); break;
                case EventKind::block_committed: on_block_committed(event.round); break;
            }
        }
    }

    double queue_time_ = 0.0;
    std::vector<double>* work_tally = nullptr;
};

NetworkSimulation::NetworkSimulation(unsigned total_nodes, const SimulationConfig& config,
                                     const CalibratedCostModel& costs, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(total_nodes, config, costs, seed)) {}

NetworkSimulation::~NetworkSimulation() = default;

const ledger::Chain& NetworkSimulation::chain() const { return impl_->chain; }
const RoleAssignment& NetworkSimulation::roles() const { return impl_->roles; }
const TopologyGraph& NetworkSimulation::topology() const { return impl_->topo; }
std::size_t NetworkSimulation::threshold() const { return impl_->t; }
std::size_t NetworkSimulation::verifiers_per_round() const { return impl_->v; }
double NetworkSimulation::bottleneck_interval_ms() const { return impl_->pace_ms; }
double NetworkSimulation::active_load() const { return impl_->load; }

ExperimentResult NetworkSimulation::run(unsigned rounds) {
    if (rounds == 0) {
        throw ConfigError("experiment needs at least one round");
    }
    Impl& im = *impl_;
    im.run_rounds(rounds);

    ExperimentResult result;
    result.round_metrics = im.metrics;
    MetricsReport& report = result.report;
    report.mode = im.config.mode;
    report.nodes = im.n;
    report.seed = im.seed;
    report.rounds = rounds;
    double response_sum = 0.0;
    for (const RoundMetrics& m : im.metrics) {
        report.committed_tx += m.tx_count;
        response_sum += m.response_s;
        report.t_blockchain_s = std::max(report.t_blockchain_s, m.response_s);
    }
    report.response_time_s = response_sum / rounds;
    if (rounds == 1) {
        report.throughput_tx_per_s = im.metrics.front().tx_count / im.metrics.front().response_s;
    } else {
        // Sustained rate between the first and last commit; excludes the
        // pipeline fill so the figure reflects steady state.
        const double first = im.metrics.front().commit_ms;
        const double last = im.metrics.back().commit_ms;
        std::size_t tx_after_first = 0;
        for (std::size_t i = 1; i < im.metrics.size(); ++i) tx_after_first += im.metrics[i].tx_count;
        report.throughput_tx_per_s = tx_after_first / ((last - first) / 1000.0);
    }
    result.chain_head_digest = to_hex(im.chain.head().digest());
    return result;
}

MetricsReport run_single(unsigned total_nodes, const SimulationConfig& config, const CalibratedCostModel& costs,
                         std::uint64_t seed, unsigned rounds) {
    NetworkSimulation sim(total_nodes, config, costs, seed);
    return sim.run(rounds).report;
}

std::vector<MetricsReport> run_experiment(std::span<const unsigned> node_counts, Mode mode,
                                          const SimulationConfig& base, const CalibratedCostModel& costs,
                                          std::span<const std::uint64_t> seeds, unsigned rounds) {
    if (node_counts.empty()) {
        throw ConfigError("node count list must not be empty");
    }
    SimulationConfig config = base;
    config.mode = mode;
    std::vector<MetricsReport> reports;
    reports.reserve(node_counts.size() * seeds.size());
    for (unsigned n : node_counts) {
        for (std::uint64_t seed : seeds) {
            reports.push_back(run_single(n, config, costs, seed, rounds));
        }
    }
    return reports;
}

CycleReport tracking_cycle(unsigned total_nodes, const SimulationConfig& config, const CalibratedCostModel& costs,
                           std::uint64_t seed, double window_s) {
    SimulationConfig cycle_config = config;
    cycle_config.batch_size = std::max<std::size_t>(total_nodes, 1);

    CycleReport report;
    report.nodes = total_nodes;
    report.window_s = window_s;
    report.observations = total_nodes;
    if (total_nodes == 0) {
        report.slack_s = window_s;
        return report;
    }

    NetworkSimulation sim(total_nodes, cycle_config, costs, seed);
    const ExperimentResult result = sim.run(1);
    report.committed = result.report.committed_tx;
    report.blocks = static_cast<unsigned>(result.report.rounds);
    report.commit_time_s = result.round_metrics.front().response_s;
    report.slack_s = window_s - report.commit_time_s;
    if (report.commit_time_s > window_s) {
        std::ostringstream message;
        message << "tracking cycle committed at t=" << report.commit_time_s << " s, past the " << window_s
                << " s measurement window";
        throw WindowOverrunError(message.str());
    }
    return report;
}

} // namespace orbitledger::sim
