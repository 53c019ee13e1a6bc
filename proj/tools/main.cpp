#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbitledger/config.hpp"
#include "orbitledger/errors.hpp"
#include "orbitledger/group.hpp"
#include "orbitledger/ledger.hpp"
#include "orbitledger/report.hpp"
#include "orbitledger/rng.hpp"
#include "orbitledger/simnet.hpp"

namespace {

namespace col = orbitledger;
namespace con = orbitledger::constellation;
namespace sim = orbitledger::sim;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::string mode = "both";
};

col::cli::RunConfig load_config(const GlobalOptions& options) {
    col::cli::RunConfig config = options.config_path.empty() ? col::cli::RunConfig::defaults()
                                                             : col::cli::RunConfig::load(options.config_path);
    if (options.seed) {
        config.seeds = {*options.seed};
    }
    if (options.out_dir) {
        config.output_dir = *options.out_dir;
    }
    return config;
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

int cmd_latency(const GlobalOptions& options) {
    const col::cli::RunConfig config = load_config(options);
    const con::LatencyPresetTable presets = config.load_latency_presets();
    const unsigned sweep[] = {8, 11, 13, 15};
    const bool stock_altitude = config.constellation_config.altitude_km == 550.0;

    std::filesystem::create_directories(config.output_dir);
    std::ofstream csv(config.output_dir / "latency.csv");
    csv << "configuration,sats_per_orbit,total_sats,intra_isl_ms,inter_isl_ms\n";
    std::cout << "configuration  sats/orbit  total  intra-ISL (ms)  inter-ISL (ms)\n";
    for (con::WalkerPattern pattern : {con::WalkerPattern::delta, con::WalkerPattern::star}) {
        for (unsigned sats : sweep) {
            con::ConstellationConfig cc = config.constellation_config;
            cc.pattern = pattern;
            cc.sats_per_plane = sats;
            cc.inclination_deg = pattern == con::WalkerPattern::star ? 87.0 : 53.0;
            const double intra = con::intra_plane_latency_ms(cc);
            const auto preset = presets.find(pattern, sats);
            const double inter = (preset && stock_altitude) ? preset->inter_ms : con::inter_plane_latency_ms(cc);
            std::cout << con::to_string(pattern) << (pattern == con::WalkerPattern::delta ? "          " : "           ")
                      << sats << (sats < 10 ? "           " : "          ") << sats * cc.planes << "     "
                      << fixed(intra) << "           " << fixed(inter) << "\n";
            csv << con::to_string(pattern) << ',' << sats << ',' << sats * cc.planes << ',' << fixed(intra) << ','
                << fixed(inter) << '\n';
        }
    }
    std::cout << "wrote " << (config.output_dir / "latency.csv").string() << "\n";
    return 0;
}

int cmd_simulate(const GlobalOptions& options) {
    col::cli::RunConfig config = load_config(options);
    config.validate();
    const sim::CalibratedCostModel costs = config.load_cost_model();

    std::vector<sim::Mode> modes;
    if (options.mode == "selective") {
        modes = {sim::Mode::selective};
    } else if (options.mode == "full") {
        modes = {sim::Mode::full};
    } else {
        modes = {sim::Mode::selective, sim::Mode::full};
    }

    std::vector<sim::MetricsReport> reports;
    for (sim::Mode mode : modes) {
        const auto batch = sim::run_experiment(config.node_counts, mode, config.simulation, costs, config.seeds,
                                               config.rounds);
        reports.insert(reports.end(), batch.begin(), batch.end());
    }

    std::filesystem::create_directories(config.output_dir);
    col::cli::write_metrics_csv(config.output_dir / "metrics.csv", reports);
    col::cli::write_series(config.output_dir / "throughput_selective.dat", reports, sim::Mode::selective, true);
    col::cli::write_series(config.output_dir / "throughput_full.dat", reports, sim::Mode::full, true);
    col::cli::write_series(config.output_dir / "response_selective.dat", reports, sim::Mode::selective, false);
    col::cli::write_series(config.output_dir / "response_full.dat", reports, sim::Mode::full, false);
    col::cli::write_gnuplot_script(config.output_dir / "plots.gp");

    const sim::MetricsReport* peak = nullptr;
    for (const sim::MetricsReport& r : reports) {
        if (r.mode == sim::Mode::selective && (peak == nullptr || r.throughput_tx_per_s > peak->throughput_tx_per_s)) {
            peak = &r;
        }
    }
    if (peak != nullptr) {
        std::cout << "peak selective throughput: " << fixed(peak->throughput_tx_per_s, 1) << " TX/s at "
                  << peak->nodes << " nodes\n";
    }

    bool constraints_ok = true;
    for (const sim::MetricsReport& r : reports) {
        if (r.nodes > sim::kMaxSatellites) continue;
        const sim::ConstraintReport check = sim::check_constraints(r.nodes, r.t_blockchain_s);
        std::cout << "constraints at n=" << r.nodes << " (" << sim::to_string(r.mode)
                  << "): " << (check.pass ? "pass" : "FAIL") << "\n";
        for (const std::string& v : check.violations) {
            std::cout << "  violation: " << v << "\n";
        }
        constraints_ok = constraints_ok && check.pass;
    }
    std::cout << "wrote " << (config.output_dir / "metrics.csv").string() << "\n";
    return constraints_ok ? 0 : 1;
}

int cmd_roles(const GlobalOptions& options) {
    const col::cli::RunConfig config = load_config(options);
    std::cout << "total  verifiers  approvers  shared\n";
    for (unsigned n : config.node_counts) {
        const sim::RoleAssignment roles = sim::assign_roles(n, config.simulation.roles_from_table);
        std::cout << n << "     " << roles.verifiers << "         " << roles.approvers << "          " << roles.shared
                  << "\n";
    }
    return 0;
}

int cmd_constraints(unsigned nodes, double t_blockchain) {
    const sim::ConstraintReport report = sim::check_constraints(nodes, t_blockchain);
    std::cout << "n=" << nodes << " t_blockchain=" << t_blockchain << " s: " << (report.pass ? "pass" : "fail")
              << "\n";
    for (const std::string& v : report.violations) {
        std::cout << "violation: " << v << "\n";
    }
    return report.pass ? 0 : 1;
}

int cmd_cycle(const GlobalOptions& options, unsigned nodes) {
    const col::cli::RunConfig config = load_config(options);
    const sim::CalibratedCostModel costs = config.load_cost_model();
    const sim::CycleReport report =
        sim::tracking_cycle(nodes, config.simulation, costs, config.seeds.front(), sim::kMeasurementWindowS);
    std::cout << "tracking cycle over " << report.nodes << " satellites\n"
              << "  observations: " << report.observations << "\n"
              << "  committed:    " << report.committed << " in " << report.blocks << " block(s)\n"
              << "  commit time:  " << fixed(report.commit_time_s) << " s\n"
              << "  window slack: " << fixed(report.slack_s) << " s of " << fixed(report.window_s, 0) << " s\n";
    const sim::ConstraintReport check = sim::check_constraints(report.nodes, report.commit_time_s);
    std::cout << "  constraints:  " << (check.pass ? "pass" : "fail") << "\n";
    return check.pass ? 0 : 1;
}

int cmd_inspect(const std::string& chain_path) {
    const col::ledger::Chain chain = col::ledger::Chain::import_from(chain_path);
    for (const col::ledger::Block& block : chain.blocks()) {
        std::cout << "height " << block.height << "  digest " << col::to_hex(block.digest()) << "  tx "
                  << block.transactions.size() << "  approvers [";
        for (std::size_t i = 0; i < block.approver_ids.size(); ++i) {
            std::cout << (i == 0 ? "" : " ") << block.approver_ids[i];
        }
        std::cout << "]\n";
    }
    const col::ledger::ChainValidation validation = chain.validate();
    if (validation.valid) {
        std::cout << "chain valid (" << chain.blocks().size() << " blocks)\n";
        return 0;
    }
    std::cout << "chain invalid at height " << validation.first_invalid_height << "\n";
    return 1;
}

// Mock-group property suite: reconstruction completeness plus tamper
// rejection, the two checks worth running on every fresh build.
int cmd_selftest() {
    using col::math::GroupDescription;
    using col::math::Scalar;

    const col::math::Group group(GroupDescription::mock_additive(1009));
    col::SplitMix64 rng(20250810);
    unsigned reconstruction_pass = 0;
    unsigned tamper_detected = 0;
    const unsigned trials = 100;

    for (unsigned trial = 0; trial < trials; ++trial) {
        const std::size_t n = 3 + rng.next_below(10);
        const std::size_t t = 1 + rng.next_below(n);
        const auto keys = orbitledger::consensus::keygen(n, t, group, rng.next());

        std::vector<std::size_t> index(n);
        for (std::size_t i = 0; i < n; ++i) index[i] = i;
        rng.shuffle(index);

        std::vector<col::math::IdShare> subset;
        for (std::size_t k = 0; k < t; ++k) {
            subset.push_back({keys.shares[index[k]].owner.id, keys.shares[index[k]].share});
        }
        if (reconstruct_in_exponent(group, subset) == keys.public_key) {
            ++reconstruction_pass;
        }

        subset[rng.next_below(subset.size())].share = group.scalar_field().random(rng);
        if (!(reconstruct_in_exponent(group, subset) == keys.public_key)) {
            ++tamper_detected; // rejection expected
        }
    }

    std::cout << "reconstruction: " << reconstruction_pass << "/" << trials << " subsets matched f(0)P\n";
    std::cout << "tamper detection: " << tamper_detected << "/" << trials << " corrupted shares rejected (expected)\n";
    const bool ok = reconstruction_pass == trials && tamper_detected >= trials - 1;
    std::cout << (ok ? "selftest pass" : "selftest FAIL") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Role-based threshold consensus over satellite constellations"};
    app.require_subcommand(1);

    GlobalOptions options;
    app.add_option("--config", options.config_path, "Run configuration file (JSON)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the experiment seed");
    std::string out_value;
    auto* out_opt = app.add_option("--out", out_value, "Output directory");
    app.add_option("--mode", options.mode, "selective, full, or both")
        ->check(CLI::IsMember({"selective", "full", "both"}));

    auto* latency = app.add_subcommand("latency", "Print the ISL latency table for both Walker patterns");
    auto* simulate = app.add_subcommand("simulate", "Run the throughput/response-time sweep");
    auto* selftest = app.add_subcommand("selftest", "Run the crypto property selftest");
    auto* roles = app.add_subcommand("roles", "Print role assignments per node count");

    auto* constraints = app.add_subcommand("constraints", "Check the satellite-count and delay constraints");
    unsigned constraint_nodes = 24;
    double constraint_delay = 0.0;
    constraints->add_option("nodes", constraint_nodes, "Network size")->required();
    constraints->add_option("t_blockchain", constraint_delay, "Per-round blockchain delay, seconds")->required();

    auto* cycle = app.add_subcommand("cycle", "Simulate one 120-second measurement window");
    unsigned cycle_nodes = 24;
    cycle->add_option("nodes", cycle_nodes, "Satellite count");

    auto* inspect = app.add_subcommand("inspect", "List and validate an exported chain");
    std::string chain_path;
    inspect->add_option("chain", chain_path, "Chain log file")->required();

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) options.seed = seed_value;
    if (out_opt->count() > 0) options.out_dir = out_value;

    try {
        if (latency->parsed()) return cmd_latency(options);
        if (simulate->parsed()) return cmd_simulate(options);
        if (selftest->parsed()) return cmd_selftest();
        if (roles->parsed()) return cmd_roles(options);
        if (constraints->parsed()) return cmd_constraints(constraint_nodes, constraint_delay);
        if (cycle->parsed()) return cmd_cycle(options, cycle_nodes);
        if (inspect->parsed()) return cmd_inspect(chain_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
