#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "orbitledger/simnet.hpp"

namespace orbitledger::cli {

// Fixed CSV layout: mode,nodes,seed,throughput_tx_s,response_time_s,
// t_blockchain_s. Values print with six decimals so repeated runs diff
// byte-for-byte.
std::string metrics_csv(std::span<const sim::MetricsReport> reports);

void write_metrics_csv(const std::filesystem::path& path, std::span<const sim::MetricsReport> reports);

// Two-column series file (nodes, value) for one mode/metric pair.
void write_series(const std::filesystem::path& path, std::span<const sim::MetricsReport> reports, sim::Mode mode,
                  bool throughput);

// Gnuplot script reproducing the throughput and response-time figures from
// the emitted series files.
void write_gnuplot_script(const std::filesystem::path& path);

} // namespace orbitledger::cli
