#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "orbitledger/constellation.hpp"
#include "orbitledger/simnet.hpp"

namespace orbitledger::cli {

// Declarative run configuration. Loaded from a single JSON file; every
// field has a working default so the tool runs without one. Relative paths
// resolve against the config file location, and ORBITLEDGER_OUT overrides
// the output directory.
struct RunConfig {
    constellation::ConstellationConfig constellation_config =
        constellation::ConstellationConfig::preset(constellation::WalkerPattern::star, 3, 8);
    sim::SimulationConfig simulation;
    std::vector<unsigned> node_counts = {15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<std::uint64_t> seeds = {42};
    unsigned rounds = 20;
    std::filesystem::path output_dir = "out";
    std::filesystem::path cost_model_path;      // empty: compiled-in defaults
    std::filesystem::path latency_presets_path; // empty: compiled-in table

    sim::CalibratedCostModel load_cost_model() const;
    constellation::LatencyPresetTable load_latency_presets() const;

    void validate() const;

    static RunConfig load(const std::filesystem::path& path);
    static RunConfig defaults();
};

// Locates a file shipped in the repository data directory (cost model
// defaults, latency presets), preferring the working directory copy.
std::filesystem::path find_data_file(const std::string& name);

} // namespace orbitledger::cli
