#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <unordered_set>

#include "orbitledger/config.hpp"
#include "orbitledger/errors.hpp"
#include "orbitledger/report.hpp"
#include "orbitledger/simnet.hpp"

using namespace orbitledger;
using sim::CalibratedCostModel;
using sim::Mode;
using sim::RoleAssignment;
using sim::SimulationConfig;

namespace {

CalibratedCostModel test_costs() {
    // Deliberately light constants so unit tests stay fast; the calibrated
    // defaults are exercised by the acceptance suite.
    CalibratedCostModel costs = CalibratedCostModel::defaults();
    return costs;
}

} // namespace

TEST_CASE("role presets match the benchmark table") {
    const std::pair<unsigned, RoleAssignment> expected[] = {
        {15, {15, 14, 4, 3}},  {20, {20, 18, 6, 4}},  {25, {25, 22, 8, 5}},  {30, {30, 27, 9, 6}},
        {35, {35, 31, 11, 7}}, {40, {40, 36, 12, 8}}, {45, {45, 41, 13, 9}}, {50, {50, 45, 15, 10}},
    };
    for (const auto& [total, roles] : expected) {
        const RoleAssignment got = sim::assign_roles(total);
        CHECK(got.total == roles.total);
        CHECK(got.verifiers == roles.verifiers);
        CHECK(got.approvers == roles.approvers);
        CHECK(got.shared == roles.shared);
    }
}

TEST_CASE("role formula for off-table sizes") {
    const RoleAssignment roles = sim::assign_roles(24);
    CHECK(roles.verifiers == 22);
    CHECK(roles.approvers == 7);
    CHECK(roles.shared == 5);

    for (unsigned total = 5; total <= 100; ++total) {
        const RoleAssignment r = sim::assign_roles(total);
        CHECK(r.verifiers + r.approvers - r.shared == total);
        CHECK(r.approvers >= 1);
        CHECK(r.shared <= r.approvers);
    }

    CHECK_THROWS_AS(sim::assign_roles(4), TooFewNodesError);

    // Formula mode overrides the table rows too.
    const RoleAssignment formula30 = sim::assign_roles(30, false);
    CHECK(formula30.approvers == 9);
    CHECK(formula30.shared == 6);
    CHECK(formula30.verifiers == 27);
}

TEST_CASE("constraint checker") {
    const auto pass = sim::check_constraints(24, 6.87);
    CHECK(pass.pass);
    CHECK(pass.violations.empty());

    const auto too_many = sim::check_constraints(25, 6.87);
    CHECK_FALSE(too_many.pass);
    REQUIRE(too_many.violations.size() == 1);
    CHECK(too_many.violations[0].find("partitioning") != std::string::npos);

    const auto too_slow = sim::check_constraints(24, 120.01);
    CHECK_FALSE(too_slow.pass);
    REQUIRE(too_slow.violations.size() == 1);
    CHECK(too_slow.violations[0].find("120") != std::string::npos);

    const auto both = sim::check_constraints(30, 150.0);
    CHECK(both.violations.size() == 2);
}

TEST_CASE("contention profile interpolation") {
    sim::ContentionProfile profile;
    profile.load_knots = {10, 20};
    profile.busy_scale = {1.0, 3.0};
    profile.extra_wait_ms = {100, 300};
    profile.validate();

    CHECK(profile.busy_scale_at(5) == 1.0);
    CHECK(profile.busy_scale_at(15) == doctest::Approx(2.0));
    CHECK(profile.busy_scale_at(25) == 3.0);
    CHECK(profile.extra_wait_ms_at(12.5) == doctest::Approx(150.0));

    profile.busy_scale = {3.0, 1.0}; // decreasing
    CHECK_THROWS_AS(profile.validate(), ConfigError);
}

TEST_CASE("cost model json round trip") {
    const CalibratedCostModel defaults = CalibratedCostModel::defaults();
    const auto path = std::filesystem::temp_directory_path() / "orbitledger_cost_model.json";
    {
        std::ofstream out(path);
        out << defaults.to_json();
    }
    const CalibratedCostModel loaded = CalibratedCostModel::load(path);
    CHECK(loaded.version == defaults.version);
    CHECK(loaded.cost.bandwidth_kbps == defaults.cost.bandwidth_kbps);
    CHECK(loaded.contention.load_knots == defaults.contention.load_knots);
    std::filesystem::remove(path);

    // The shipped defaults file parses and matches the compiled-in values.
    const auto shipped = cli::find_data_file("cost_model_default.json");
    REQUIRE(!shipped.empty());
    const CalibratedCostModel from_file = CalibratedCostModel::load(shipped);
    CHECK(from_file.cost.contribution_compute_ms == defaults.cost.contribution_compute_ms);
    CHECK(from_file.contention.busy_scale == defaults.contention.busy_scale);
}

TEST_CASE("simulation determinism and ledger integrity") {
    SimulationConfig config;
    config.mode = Mode::selective;
    config.batch_size = 50;

    sim::NetworkSimulation first(20, config, test_costs(), 7);
    const auto run1 = first.run(6);
    sim::NetworkSimulation second(20, config, test_costs(), 7);
    const auto run2 = second.run(6);

    CHECK(run1.chain_head_digest == run2.chain_head_digest);
    CHECK(run1.report.throughput_tx_per_s == run2.report.throughput_tx_per_s);
    CHECK(run1.report.response_time_s == run2.report.response_time_s);
    CHECK(cli::metrics_csv({&run1.report, 1}) == cli::metrics_csv({&run2.report, 1}));

    // A different seed changes the chain but not its validity.
    sim::NetworkSimulation other(20, config, test_costs(), 8);
    const auto run3 = other.run(6);
    CHECK(run3.chain_head_digest != run1.chain_head_digest);

    CHECK(first.chain().validate().valid);
    CHECK(first.chain().blocks().size() == 7); // genesis + 6
    for (const auto& block : first.chain().blocks()) {
        if (block.height == 0) continue;
        CHECK(block.approval_sum == first.chain().public_key());
        CHECK(block.verification_sum == first.chain().public_key());
        CHECK(block.approver_ids.size() >= first.threshold());
    }

    std::unordered_set<std::string> digests;
    for (const auto& block : first.chain().blocks()) {
        for (const auto& tx : block.transactions) {
            CHECK(digests.insert(std::string(reinterpret_cast<const char*>(tx.digest.data()), 32)).second);
        }
    }
}

TEST_CASE("selective beats full participation round for round") {
    SimulationConfig config;
    config.batch_size = 100;
    for (unsigned nodes : {15u, 30u}) {
        config.mode = Mode::selective;
        const auto selective = sim::run_single(nodes, config, test_costs(), 3, 5);
        config.mode = Mode::full;
        const auto full = sim::run_single(nodes, config, test_costs(), 3, 5);
        CHECK(selective.throughput_tx_per_s >= full.throughput_tx_per_s);
        CHECK(selective.response_time_s <= full.response_time_s);
    }
}

TEST_CASE("run_round basics") {
    SimulationConfig config;
    config.batch_size = 1;
    const auto report = sim::run_single(15, config, test_costs(), 11, 1);
    CHECK(report.committed_tx == 1);
    CHECK(report.rounds == 1);
    // Single round: throughput is one transaction over its response time.
    CHECK(report.throughput_tx_per_s == doctest::Approx(1.0 / report.response_time_s));
    CHECK(report.t_blockchain_s == doctest::Approx(report.response_time_s));
}

TEST_CASE("experiment sweep plumbing") {
    SimulationConfig config;
    config.batch_size = 20;
    const std::vector<unsigned> counts{15, 20};
    const std::vector<std::uint64_t> seeds{1, 2};
    const auto reports = sim::run_experiment(counts, Mode::selective, config, test_costs(), seeds, 3);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].nodes == 15);
    CHECK(reports[1].seed == 2);
    CHECK(reports[3].nodes == 20);

    const std::vector<unsigned> empty;
    CHECK_THROWS_AS(sim::run_experiment(empty, Mode::selective, config, test_costs(), seeds, 3), ConfigError);
}

TEST_CASE("tracking cycle commits inside the window") {
    SimulationConfig config;
    const auto report = sim::tracking_cycle(24, config, test_costs(), 42);
    CHECK(report.nodes == 24);
    CHECK(report.observations == 24);
    CHECK(report.committed == 24);
    CHECK(report.blocks == 1);
    CHECK(report.commit_time_s < sim::kMeasurementWindowS);
    CHECK(report.slack_s == doctest::Approx(sim::kMeasurementWindowS - report.commit_time_s));

    SUBCASE("inflated costs overrun the window") {
        CalibratedCostModel slow = test_costs();
        slow.cost.contribution_compute_ms *= 20.0;
        slow.cost.proposer_assembly_ms *= 20.0;
        slow.cost.per_message_overhead_ms *= 20.0;
        slow.cost.hash_ms_per_kb *= 20.0;
        slow.cost.bandwidth_kbps /= 20.0;
        for (auto& wait : slow.contention.extra_wait_ms) wait *= 20.0;
        CHECK_THROWS_AS(sim::tracking_cycle(24, config, slow, 42), WindowOverrunError);
    }

    SUBCASE("zero observations produce an empty report") {
        const auto empty = sim::tracking_cycle(0, config, test_costs(), 42);
        CHECK(empty.observations == 0);
        CHECK(empty.committed == 0);
        CHECK(empty.blocks == 0);
        CHECK(empty.slack_s == sim::kMeasurementWindowS);
    }
}

TEST_CASE("verifier subsets rotate deterministically") {
    SimulationConfig config;
    config.batch_size = 10;
    sim::NetworkSimulation sim_run(25, config, test_costs(), 5);
    CHECK(sim_run.roles().verifiers == 22);
    CHECK(sim_run.threshold() == 8);
    CHECK(sim_run.verifiers_per_round() == 8);
    CHECK(sim_run.active_load() == doctest::Approx(16.0));
    const auto result = sim_run.run(4);
    CHECK(result.report.committed_tx == 40);
    for (const auto& metrics : result.round_metrics) {
        CHECK(metrics.verification_attempts == 1);
    }
}
