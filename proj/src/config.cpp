#include "orbitledger/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "orbitledger/errors.hpp"

namespace orbitledger::cli {

namespace {

constellation::WalkerPattern parse_pattern(const std::string& name) {
    if (name == "delta") return constellation::WalkerPattern::delta;
    if (name == "star") return constellation::WalkerPattern::star;
    throw ConfigError("unknown walker pattern '" + name + "' (expected delta or star)");
}

} // namespace

std::filesystem::path find_data_file(const std::string& name) {
    const std::filesystem::path candidates[] = {
        std::filesystem::path("data") / name,
#ifdef ORBITLEDGER_DATA_DIR
        std::filesystem::path(ORBITLEDGER_DATA_DIR) / name,
#endif
    };
    for (const auto& path : candidates) {
        if (std::filesystem::exists(path)) return path;
    }
    return {};
}

sim::CalibratedCostModel RunConfig::load_cost_model() const {
    if (!cost_model_path.empty()) {
        return sim::CalibratedCostModel::load(cost_model_path);
    }
    const std::filesystem::path shipped = find_data_file("cost_model_default.json");
    if (!shipped.empty()) {
        return sim::CalibratedCostModel::load(shipped);
    }
    return sim::CalibratedCostModel::defaults();
}

constellation::LatencyPresetTable RunConfig::load_latency_presets() const {
    if (!latency_presets_path.empty()) {
        return constellation::LatencyPresetTable::load(latency_presets_path);
    }
    const std::filesystem::path shipped = find_data_file("latency_presets.json");
    if (!shipped.empty()) {
        return constellation::LatencyPresetTable::load(shipped);
    }
    return constellation::LatencyPresetTable::builtin();
}

void RunConfig::validate() const {
    constellation_config.validate();
    if (node_counts.empty()) {
        throw ConfigError("node_counts must not be empty");
    }
    if (seeds.empty()) {
        throw ConfigError("seeds must not be empty");
    }
    if (rounds == 0) {
        throw ConfigError("rounds must be at least 1");
    }
    if (!cost_model_path.empty() && !std::filesystem::exists(cost_model_path)) {
        throw ConfigError("cost model file does not exist: " + cost_model_path.string());
    }
    if (!latency_presets_path.empty() && !std::filesystem::exists(latency_presets_path)) {
        throw ConfigError("latency preset file does not exist: " + latency_presets_path.string());
    }
}

RunConfig RunConfig::defaults() {
    RunConfig config;
    if (const char* out = std::getenv("ORBITLEDGER_OUT"); out != nullptr && *out != '\0') {
        config.output_dir = out;
    }
    return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in); // keeps line/column info in errors
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }

    RunConfig config = defaults();
    const std::filesystem::path base = path.parent_path();
    auto resolve = [&base](const std::string& p) {
        const std::filesystem::path candidate(p);
        return candidate.is_absolute() ? candidate : base / candidate;
    };

    try {
        if (doc.contains("constellation")) {
            const auto& c = doc["constellation"];
            auto& cc = config.constellation_config;
            if (c.contains("pattern")) cc.pattern = parse_pattern(c["pattern"].get<std::string>());
            if (c.contains("planes")) cc.planes = c["planes"].get<unsigned>();
            if (c.contains("sats_per_plane")) cc.sats_per_plane = c["sats_per_plane"].get<unsigned>();
            if (c.contains("altitude_km")) cc.altitude_km = c["altitude_km"].get<double>();
            if (c.contains("inclination_deg")) cc.inclination_deg = c["inclination_deg"].get<double>();
            if (c.contains("phasing_factor")) cc.phasing_factor = c["phasing_factor"].get<unsigned>();
            config.simulation.pattern = cc.pattern;
        }
        if (doc.contains("consensus")) {
            const auto& c = doc["consensus"];
            if (c.contains("threshold")) config.simulation.threshold_override = c["threshold"].get<unsigned>();
            if (c.contains("verifiers")) config.simulation.verifier_override = c["verifiers"].get<unsigned>();
            if (c.contains("retry_limit")) config.simulation.retry_limit = c["retry_limit"].get<unsigned>();
        }
        if (doc.contains("roles_mode")) {
            const std::string mode = doc["roles_mode"].get<std::string>();
            if (mode == "table-preset") {
                config.simulation.roles_from_table = true;
            } else if (mode == "formula") {
                config.simulation.roles_from_table = false;
            } else {
                throw ConfigError("roles_mode must be 'table-preset' or 'formula', got '" + mode + "'");
            }
        }
        if (doc.contains("batch_size")) config.simulation.batch_size = doc["batch_size"].get<std::size_t>();
        if (doc.contains("node_counts")) config.node_counts = doc["node_counts"].get<std::vector<unsigned>>();
        if (doc.contains("seeds")) config.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
        if (doc.contains("rounds")) config.rounds = doc["rounds"].get<unsigned>();
        if (doc.contains("cost_model")) config.cost_model_path = resolve(doc["cost_model"].get<std::string>());
        if (doc.contains("latency_presets")) {
            config.latency_presets_path = resolve(doc["latency_presets"].get<std::string>());
        }
        if (doc.contains("output_dir") && std::getenv("ORBITLEDGER_OUT") == nullptr) {
            config.output_dir = resolve(doc["output_dir"].get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }

    config.validate();
    return config;
}

} // namespace orbitledger::cli
