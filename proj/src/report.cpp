#include "orbitledger/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "orbitledger/errors.hpp"

namespace orbitledger::cli {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::string metrics_csv(std::span<const sim::MetricsReport> reports) {
    std::string out = "mode,nodes,seed,throughput_tx_s,response_time_s,t_blockchain_s\n";
    for (const sim::MetricsReport& r : reports) {
        out += sim::to_string(r.mode);
        out += ',' + std::to_string(r.nodes);
        out += ',' + std::to_string(r.seed);
        out += ',' + fixed6(r.throughput_tx_per_s);
        out += ',' + fixed6(r.response_time_s);
        out += ',' + fixed6(r.t_blockchain_s);
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const sim::MetricsReport> reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << metrics_csv(reports);
}

void write_series(const std::filesystem::path& path, std::span<const sim::MetricsReport> reports, sim::Mode mode,
                  bool throughput) {
    // Average over seeds per node count, keyed and emitted in ascending order.
    std::map<unsigned, std::pair<double, unsigned>> accumulated;
    for (const sim::MetricsReport& r : reports) {
        if (r.mode != mode) continue;
        auto& slot = accumulated[r.nodes];
        slot.first += throughput ? r.throughput_tx_per_s : r.response_time_s;
        slot.second += 1;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    for (const auto& [nodes, slot] : accumulated) {
        out << nodes << ' ' << fixed6(slot.first / slot.second) << '\n';
    }
}

void write_gnuplot_script(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << "set grid\n"
           "set xlabel 'Number of total nodes'\n"
           "set logscale y 10\n"
           "set term png size 800,600\n"
           "set output 'throughput.png'\n"
           "set ylabel 'Throughput (TX/s)'\n"
           "plot 'throughput_selective.dat' with linespoints title 'Selective Participation', \\\n"
           "     'throughput_full.dat' with linespoints title 'Full Participation'\n"
           "set output 'response_time.png'\n"
           "set ylabel 'Response time (s)'\n"
           "plot 'response_selective.dat' with linespoints title 'Selective Participation', \\\n"
           "     'response_full.dat' with linespoints title 'Full Participation'\n";
}

} // namespace orbitledger::cli
