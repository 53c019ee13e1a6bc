#include "orbitledger/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <nlohmann/json.hpp>

#include "orbitledger/errors.hpp"

namespace orbitledger::constellation {

namespace {

constexpr double kPi = std::numbers::pi;

double distance_km(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

const char* to_string(WalkerPattern pattern) { return pattern == WalkerPattern::delta ? "delta" : "star"; }

double ConstellationConfig::orbital_period_s() const {
    const double a = orbit_radius_km();
    return 2.0 * kPi * std::sqrt(a * a * a / kMuKm3S2);
}

void ConstellationConfig::validate() const {
    if (planes < 1) throw ConfigError("constellation needs at least one orbital plane");
    if (sats_per_plane < 1) throw ConfigError("constellation needs at least one satellite per plane");
    if (!(altitude_km > 0.0)) throw ConfigError("altitude must be positive");
    if (phasing_factor >= planes) throw ConfigError("phasing factor must be below the plane count");
}

ConstellationConfig ConstellationConfig::preset(WalkerPattern pattern, unsigned planes, unsigned sats_per_plane,
                                                double altitude_km) {
    ConstellationConfig config;
    config.pattern = pattern;
    config.planes = planes;
    config.sats_per_plane = sats_per_plane;
    config.altitude_km = altitude_km;
    config.inclination_deg = pattern == WalkerPattern::star ? 87.0 : 53.0;
    config.phasing_factor = planes > 1 ? 1 : 0;
    return config;
}

double intra_plane_latency_ms(const ConstellationConfig& config) {
    if (config.sats_per_plane < 2) {
        throw DegeneratePlaneError("intra-plane latency needs at least 2 satellites per plane");
    }
    const double chord_km = 2.0 * config.orbit_radius_km() * std::sin(kPi / config.sats_per_plane);
    return chord_km / ConstellationConfig::kLightSpeedKmS * 1000.0;
}

SatellitePosition satellite_position(const ConstellationConfig& config, unsigned plane, unsigned slot, double time_s) {
    if (plane >= config.planes || slot >= config.sats_per_plane) {
        throw IndexOutOfRangeError("satellite index (" + std::to_string(plane) + "," + std::to_string(slot) +
                                   ") out of range");
    }
    const double raan_spread_deg = config.pattern == WalkerPattern::star ? 180.0 : 360.0;
    const double raan = raan_spread_deg / config.planes * plane * kPi / 180.0;
    const double inclination = config.inclination_deg * kPi / 180.0;
    const double mean_motion = 2.0 * kPi / config.orbital_period_s();
    // Walker phasing: slot spacing within the plane plus the F offset
    // between consecutive planes.
    const double anomaly = 2.0 * kPi * slot / config.sats_per_plane +
                           2.0 * kPi * config.phasing_factor * plane /
                               (static_cast<double>(config.planes) * config.sats_per_plane) +
                           mean_motion * time_s;

    const double r = config.orbit_radius_km();
    const double cos_u = std::cos(anomaly);
    const double sin_u = std::sin(anomaly);
    const double cos_raan = std::cos(raan);
    const double sin_raan = std::sin(raan);
    const double cos_i = std::cos(inclination);
    const double sin_i = std::sin(inclination);

    SatellitePosition pos;
    pos.plane = plane;
    pos.slot = slot;
    pos.position_km = {
        r * (cos_raan * cos_u - sin_raan * sin_u * cos_i),
        r * (sin_raan * cos_u + cos_raan * sin_u * cos_i),
        r * (sin_u * sin_i),
    };
    return pos;
}

double inter_plane_latency_ms(const ConstellationConfig& config, double averaging_window_s, unsigned samples) {
    if (config.planes < 2) {
        throw SinglePlaneError("inter-plane latency needs at least 2 planes");
    }
    if (samples == 0) samples = 1;
    double total_km = 0.0;
    std::size_t count = 0;
    for (unsigned s = 0; s < samples; ++s) {
        const double time_s = averaging_window_s * s / samples;
        for (unsigned plane = 0; plane < config.planes; ++plane) {
            const unsigned next_plane = (plane + 1) % config.planes;
            for (unsigned slot = 0; slot < config.sats_per_plane; ++slot) {
                const SatellitePosition from = satellite_position(config, plane, slot, time_s);
                double nearest = std::numeric_limits<double>::infinity();
                for (unsigned other = 0; other < config.sats_per_plane; ++other) {
                    nearest = std::min(nearest,
                                       distance_km(from.position_km,
                                                   satellite_position(config, next_plane, other, time_s).position_km));
                }
                total_km += nearest;
                ++count;
            }
        }
    }
    return total_km / count / ConstellationConfig::kLightSpeedKmS * 1000.0;
}

std::size_t TopologyGraph::intra_edge_count() const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [](const TopologyEdge& e) { return e.kind == LinkKind::intra; }));
}

std::size_t TopologyGraph::inter_edge_count() const { return edges.size() - intra_edge_count(); }

std::vector<unsigned> TopologyGraph::degrees() const {
    std::vector<unsigned> deg(node_count, 0);
    for (const TopologyEdge& e : edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return deg;
}

bool TopologyGraph::connected() const {
    if (node_count == 0) return false;
    std::vector<std::vector<unsigned>> adj(node_count);
    for (const TopologyEdge& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<bool> seen(node_count, false);
    std::vector<unsigned> stack{0};
    seen[0] = true;
    std::size_t visited = 0;
    while (!stack.empty()) {
        const unsigned v = stack.back();
        stack.pop_back();
        ++visited;
        for (unsigned w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return visited == node_count;
}

LatencyPresetTable LatencyPresetTable::builtin() {
    LatencyPresetTable table;
    table.entries_ = {
        {WalkerPattern::delta, 8, 17.67, 17.06}, {WalkerPattern::delta, 11, 13.01, 14.77},
        {WalkerPattern::delta, 13, 11.05, 14.15}, {WalkerPattern::delta, 15, 9.59, 14.12},
        {WalkerPattern::star, 8, 17.67, 8.59},   {WalkerPattern::star, 11, 13.01, 14.76},
        {WalkerPattern::star, 13, 11.05, 9.82},  {WalkerPattern::star, 15, 9.60, 9.09},
    };
    return table;
}

LatencyPresetTable LatencyPresetTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open latency preset file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("latency preset file " + path.string() + ": " + e.what());
    }
    LatencyPresetTable table;
    for (const auto& row : doc.at("presets")) {
        LatencyPreset preset{};
        const std::string pattern = row.at("pattern").get<std::string>();
        if (pattern == "delta") {
            preset.pattern = WalkerPattern::delta;
        } else if (pattern == "star") {
            preset.pattern = WalkerPattern::star;
        } else {
            throw ConfigError("unknown walker pattern '" + pattern + "' in " + path.string());
        }
        preset.sats_per_plane = row.at("sats_per_plane").get<unsigned>();
        preset.intra_ms = row.at("intra_ms").get<double>();
        preset.inter_ms = row.at("inter_ms").get<double>();
        table.entries_.push_back(preset);
    }
    return table;
}

std::optional<LatencyPreset> LatencyPresetTable::find(WalkerPattern pattern, unsigned sats_per_plane) const {
    for (const LatencyPreset& preset : entries_) {
        if (preset.pattern == pattern && preset.sats_per_plane == sats_per_plane) {
            return preset;
        }
    }
    return std::nullopt;
}

namespace {

TopologyGraph build_from_planes(const ConstellationConfig& base, const std::vector<unsigned>& plane_sizes,
                                const std::optional<LatencyPresetTable>& overrides) {
    TopologyGraph graph;
    const unsigned planes = static_cast<unsigned>(plane_sizes.size());
    std::vector<unsigned> first_index(planes, 0);
    for (unsigned p = 0; p < planes; ++p) {
        first_index[p] = graph.node_count;
        graph.node_count += plane_sizes[p];
        for (unsigned s = 0; s < plane_sizes[p]; ++s) {
            graph.plane_of.push_back(p);
            graph.slot_of.push_back(s);
        }
    }

    const std::optional<LatencyPreset> preset =
        overrides ? overrides->find(base.pattern, base.sats_per_plane) : std::nullopt;

    // Per-plane geometry: plane sizes may differ when a node count does not
    // divide evenly, so chord lengths are computed per plane.
    std::vector<ConstellationConfig> plane_configs(planes, base);
    for (unsigned p = 0; p < planes; ++p) {
        plane_configs[p].sats_per_plane = std::max(plane_sizes[p], 1u);
    }

    for (unsigned p = 0; p < planes; ++p) {
        const unsigned size = plane_sizes[p];
        if (size < 2) continue;
        const double latency =
            preset && plane_sizes[p] == base.sats_per_plane ? preset->intra_ms : intra_plane_latency_ms(plane_configs[p]);
        for (unsigned s = 0; s < size; ++s) {
            const unsigned next = (s + 1) % size;
            if (size == 2 && next < s) break; // avoid doubling the single chord
            graph.edges.push_back(TopologyEdge{first_index[p] + s, first_index[p] + next, latency, LinkKind::intra});
        }
    }

    if (planes > 1) {
        double inter_latency;
        if (preset) {
            inter_latency = preset->inter_ms;
        } else {
            ConstellationConfig uniform = base;
            uniform.planes = planes;
            uniform.sats_per_plane = *std::max_element(plane_sizes.begin(), plane_sizes.end());
            inter_latency = inter_plane_latency_ms(uniform);
        }
        std::vector<std::pair<unsigned, unsigned>> seen_pairs;
        for (unsigned p = 0; p < planes; ++p) {
            const unsigned next_plane = (p + 1) % planes;
            if (plane_sizes[p] == 0 || plane_sizes[next_plane] == 0) continue;
            for (unsigned s = 0; s < plane_sizes[p]; ++s) {
                // Nearest neighbor in the next plane at epoch, by anomaly
                // fraction; rings are evenly spaced so this matches the
                // geometric nearest even when plane sizes differ.
                const double frac = static_cast<double>(s) / plane_sizes[p];
                unsigned best = 0;
                double best_delta = 2.0;
                for (unsigned o = 0; o < plane_sizes[next_plane]; ++o) {
                    const double of = static_cast<double>(o) / plane_sizes[next_plane];
                    const double delta = std::min(std::fabs(of - frac), 1.0 - std::fabs(of - frac));
                    if (delta < best_delta) {
                        best_delta = delta;
                        best = o;
                    }
                }
                const unsigned from_index = first_index[p] + s;
                const unsigned to_index = first_index[next_plane] + best;
                const auto pair = std::minmax(from_index, to_index);
                if (std::find(seen_pairs.begin(), seen_pairs.end(), std::make_pair(pair.first, pair.second)) !=
                    seen_pairs.end()) {
                    continue; // two-plane shells can propose the same link twice
                }
                seen_pairs.emplace_back(pair.first, pair.second);
                graph.edges.push_back(TopologyEdge{from_index, to_index, inter_latency, LinkKind::inter});
            }
        }
    }
    return graph;
}

} // namespace

TopologyGraph build_topology(const ConstellationConfig& config, const std::optional<LatencyPresetTable>& overrides) {
    config.validate();
    const std::vector<unsigned> plane_sizes(config.planes, config.sats_per_plane);
    return build_from_planes(config, plane_sizes, overrides);
}

TopologyGraph build_topology_for_node_count(unsigned total_nodes, WalkerPattern pattern,
                                            const std::optional<LatencyPresetTable>& overrides, double altitude_km) {
    if (total_nodes < 1) {
        throw ConfigError("topology needs at least one node");
    }
    const unsigned planes = total_nodes >= 3 ? 3u : 1u;
    std::vector<unsigned> plane_sizes(planes, total_nodes / planes);
    for (unsigned p = 0; p < total_nodes % planes; ++p) {
        ++plane_sizes[p];
    }
    ConstellationConfig base = ConstellationConfig::preset(pattern, planes, plane_sizes.front(), altitude_km);
    return build_from_planes(base, plane_sizes, overrides);
}

std::vector<unsigned> ShortestPaths::interior_nodes(unsigned from, unsigned to) const {
    std::vector<unsigned> nodes;
    int cursor = via[from * node_count + to];
    while (cursor >= 0 && static_cast<unsigned>(cursor) != from) {
        nodes.push_back(static_cast<unsigned>(cursor));
        cursor = via[from * node_count + static_cast<unsigned>(cursor)];
    }
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

double ShortestPaths::max_latency() const {
    double worst = 0.0;
    for (double v : latency_ms) {
        if (std::isfinite(v)) worst = std::max(worst, v);
    }
    return worst;
}

ShortestPaths compute_shortest_paths(const TopologyGraph& graph) {
    const unsigned n = graph.node_count;
    ShortestPaths sp;
    sp.node_count = n;
    sp.latency_ms.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
    sp.via.assign(static_cast<std::size_t>(n) * n, -1);
    sp.hops.assign(static_cast<std::size_t>(n) * n, 0);

    std::vector<std::vector<std::pair<unsigned, double>>> adj(n);
    for (const TopologyEdge& e : graph.edges) {
        adj[e.a].emplace_back(e.b, e.latency_ms);
        adj[e.b].emplace_back(e.a, e.latency_ms);
    }
    for (auto& neighbors : adj) {
        std::sort(neighbors.begin(), neighbors.end());
    }

    using QueueEntry = std::pair<double, unsigned>;
    for (unsigned src = 0; src < n; ++src) {
        auto* dist = &sp.latency_ms[static_cast<std::size_t>(src) * n];
        auto* via = &sp.via[static_cast<std::size_t>(src) * n];
        auto* hops = &sp.hops[static_cast<std::size_t>(src) * n];
        std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
        dist[src] = 0.0;
        queue.emplace(0.0, src);
        while (!queue.empty()) {
            const auto [d, v] = queue.top();
            queue.pop();
            if (d > dist[v]) continue;
            for (const auto& [w, weight] : adj[v]) {
                const double candidate = d + weight;
                if (candidate < dist[w] - 1e-12) {
                    dist[w] = candidate;
                    via[w] = static_cast<int>(v);
                    hops[w] = static_cast<std::uint16_t>(hops[v] + 1);
                    queue.emplace(candidate, w);
                }
            }
        }
    }
    return sp;
}

} // namespace orbitledger::constellation
