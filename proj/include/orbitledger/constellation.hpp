#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace orbitledger::constellation {

enum class WalkerPattern : std::uint8_t { delta = 0, star = 1 };

const char* to_string(WalkerPattern pattern);

struct ConstellationConfig {
    WalkerPattern pattern = WalkerPattern::delta;
    unsigned planes = 3;
    unsigned sats_per_plane = 8;
    double altitude_km = 550.0;
    double inclination_deg = 53.0; // 87 is the usual star default
    unsigned phasing_factor = 1;   // Walker F, 0 <= F < planes

    static constexpr double kEarthRadiusKm = 6371.0;
    static constexpr double kLightSpeedKmS = 299792.458;
    static constexpr double kMuKm3S2 = 398600.4418; // spherical Earth GM

    double orbit_radius_km() const { return kEarthRadiusKm + altitude_km; }
    double orbital_period_s() const;

    void validate() const;

    static ConstellationConfig preset(WalkerPattern pattern, unsigned planes, unsigned sats_per_plane,
                                      double altitude_km = 550.0);
};

struct SatellitePosition {
    unsigned plane = 0;
    unsigned slot = 0;
    std::array<double, 3> position_km{};
};

// Chord between adjacent evenly spaced satellites on one circular orbit,
// converted to light time: 2 (R+h) sin(pi/S) / c.
double intra_plane_latency_ms(const ConstellationConfig& config);

SatellitePosition satellite_position(const ConstellationConfig& config, unsigned plane, unsigned slot, double time_s);

// Mean nearest-neighbor light time to the next plane, sampled across the
// averaging window. Deterministic for a given config.
double inter_plane_latency_ms(const ConstellationConfig& config, double averaging_window_s = 600.0,
                              unsigned samples = 60);

enum class LinkKind : std::uint8_t { intra = 0, inter = 1 };

struct TopologyEdge {
    unsigned a = 0;
    unsigned b = 0;
    double latency_ms = 0.0;
    LinkKind kind = LinkKind::intra;
};

struct TopologyGraph {
    unsigned node_count = 0;
    std::vector<TopologyEdge> edges;
    std::vector<unsigned> plane_of;
    std::vector<unsigned> slot_of;

    std::size_t intra_edge_count() const;
    std::size_t inter_edge_count() const;
    std::vector<unsigned> degrees() const;
    bool connected() const;
};

// Latency overrides keyed by (pattern, sats_per_plane); values measured per
// constellation configuration. The built-in table matches the data file
// shipped under data/.
struct LatencyPreset {
    WalkerPattern pattern;
    unsigned sats_per_plane;
    double intra_ms;
    double inter_ms;
};

class LatencyPresetTable {
  public:
    static LatencyPresetTable builtin();
    static LatencyPresetTable load(const std::filesystem::path& path);

    std::optional<LatencyPreset> find(WalkerPattern pattern, unsigned sats_per_plane) const;
    const std::vector<LatencyPreset>& entries() const { return entries_; }

  private:
    std::vector<LatencyPreset> entries_;
};

// Ring links inside each plane plus one link from every satellite to its
// nearest neighbor in the next plane (evaluated at epoch). Preset latencies
// replace the computed ones when available.
TopologyGraph build_topology(const ConstellationConfig& config,
                             const std::optional<LatencyPresetTable>& overrides = std::nullopt);

// Same link policy for an arbitrary node count: three planes populated as
// evenly as possible. Used by the simulator when sweeping network sizes
// that do not map to a uniform Walker shell.
TopologyGraph build_topology_for_node_count(unsigned total_nodes, WalkerPattern pattern,
                                            const std::optional<LatencyPresetTable>& overrides = std::nullopt,
                                            double altitude_km = 550.0);

// All-pairs shortest paths over edge latencies (Dijkstra from every node).
struct ShortestPaths {
    unsigned node_count = 0;
    std::vector<double> latency_ms; // node_count * node_count
    std::vector<int> via;           // predecessor of j on the path i -> j
    std::vector<std::uint16_t> hops;

    double latency(unsigned from, unsigned to) const { return latency_ms[from * node_count + to]; }
    std::uint16_t hop_count(unsigned from, unsigned to) const { return hops[from * node_count + to]; }
    // Interior nodes of the path (excludes both endpoints).
    std::vector<unsigned> interior_nodes(unsigned from, unsigned to) const;
    double max_latency() const;
};

ShortestPaths compute_shortest_paths(const TopologyGraph& graph);

} // namespace orbitledger::constellation
