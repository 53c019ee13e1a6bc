#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "orbitledger/config.hpp"
#include "orbitledger/errors.hpp"
#include "orbitledger/consensus.hpp"
#include "orbitledger/constellation.hpp"
#include "orbitledger/group.hpp"
#include "orbitledger/ledger.hpp"
#include "orbitledger/report.hpp"
#include "orbitledger/simnet.hpp"

namespace py = pybind11;

using namespace orbitledger;

namespace {

math::Group make_group(std::uint64_t order, bool mock) {
    if (mock) {
        return math::Group(math::GroupDescription::mock_additive(order));
    }
    return math::Group(math::GroupDescription::elliptic(math::demo_curve(), math::kDemoCurveOrder));
}

sim::Mode parse_mode(const std::string& mode) {
    if (mode == "selective") return sim::Mode::selective;
    if (mode == "full") return sim::Mode::full;
    throw ConfigError("mode must be 'selective' or 'full', got '" + mode + "'");
}

constellation::WalkerPattern parse_pattern(const std::string& pattern) {
    if (pattern == "delta") return constellation::WalkerPattern::delta;
    if (pattern == "star") return constellation::WalkerPattern::star;
    throw ConfigError("pattern must be 'delta' or 'star', got '" + pattern + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Role-based threshold consensus and constellation simulator core";

    // --- group math -------------------------------------------------------
    py::class_<math::GroupElement>(m, "GroupElement")
        .def_readonly("x", &math::GroupElement::x)
        .def_readonly("y", &math::GroupElement::y)
        .def_readonly("infinity", &math::GroupElement::infinity)
        .def("__eq__", [](const math::GroupElement& a, const math::GroupElement& b) { return a == b; })
        .def("__repr__", [](const math::GroupElement& e) { return math::to_string(e); });

    py::class_<math::Group>(m, "Group")
        .def(py::init([](std::uint64_t order, bool mock) { return make_group(order, mock); }), py::arg("order") = 1009,
             py::arg("mock") = true)
        .def_property_readonly("order", &math::Group::order)
        .def_property_readonly("generator", &math::Group::generator)
        .def("add", &math::Group::add)
        .def("negate", &math::Group::negate)
        .def("scalar_mul",
             [](const math::Group& g, std::uint64_t s, const math::GroupElement& e) {
                 return g.scalar_mul(math::Scalar{s % g.order()}, e);
             })
        .def("reconstruct_in_exponent", [](const math::Group& g, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& shares) {
            std::vector<math::IdShare> converted;
            converted.reserve(shares.size());
            for (const auto& [id, share] : shares) {
                converted.push_back({math::Scalar{id}, math::Scalar{share}});
            }
            return math::reconstruct_in_exponent(g, converted);
        });

    m.def("lagrange_zero_coeff", [](const std::vector<std::uint64_t>& ids, std::size_t k, std::uint64_t order) {
        const math::PrimeField field(order);
        std::vector<math::Scalar> scalars;
        scalars.reserve(ids.size());
        for (std::uint64_t id : ids) scalars.push_back(field.reduce(id));
        return math::lagrange_zero_coeff(field, scalars, k).value;
    });

    m.def("poly_eval", [](const std::vector<std::uint64_t>& coefficients, std::uint64_t x, std::uint64_t order) {
        const math::PrimeField field(order);
        math::Polynomial poly;
        for (std::uint64_t c : coefficients) poly.coefficients.push_back(field.reduce(c));
        return math::poly_eval(field, poly, field.reduce(x)).value;
    });

    // --- threshold consensus ----------------------------------------------
    py::class_<consensus::KeyShare>(m, "KeyShare")
        .def_property_readonly("id", [](const consensus::KeyShare& s) { return s.owner.id.value; })
        .def_property_readonly("share", [](const consensus::KeyShare& s) { return s.share.value; });

    py::class_<consensus::KeygenResult>(m, "KeygenResult")
        .def_readonly("shares", &consensus::KeygenResult::shares)
        .def_readonly("public_key", &consensus::KeygenResult::public_key)
        .def_readonly("commitments", &consensus::KeygenResult::commitments);

    m.def("keygen", &consensus::keygen, py::arg("n"), py::arg("t"), py::arg("group"), py::arg("seed"));

    m.def("approval_contribution",
          [](const consensus::KeyShare& share, const std::vector<std::uint64_t>& approver_ids,
             const math::Group& group) {
              std::vector<math::Scalar> ids;
              for (std::uint64_t id : approver_ids) ids.push_back(math::Scalar{id});
              return consensus::compute_approval_contribution(share, ids, group).point;
          });

    m.def("verification_contribution",
          [](const consensus::KeyShare& share, const std::vector<std::uint64_t>& verifier_ids,
             const math::Group& group) {
              std::vector<math::Scalar> ids;
              for (std::uint64_t id : verifier_ids) ids.push_back(math::Scalar{id});
              return consensus::compute_verification_contribution(share, ids, group).point;
          });

    // --- roles and constraints --------------------------------------------
    py::class_<sim::RoleAssignment>(m, "RoleAssignment")
        .def_readonly("total", &sim::RoleAssignment::total)
        .def_readonly("verifiers", &sim::RoleAssignment::verifiers)
        .def_readonly("approvers", &sim::RoleAssignment::approvers)
        .def_readonly("shared", &sim::RoleAssignment::shared);

    m.def("assign_roles", &sim::assign_roles, py::arg("total"), py::arg("use_table_presets") = true);

    m.def("check_constraints", [](unsigned n, double t_blockchain_s) {
        const sim::ConstraintReport report = sim::check_constraints(n, t_blockchain_s);
        return py::make_tuple(report.pass, report.violations);
    });

    // --- constellation ------------------------------------------------------
    py::class_<constellation::ConstellationConfig>(m, "ConstellationConfig")
        .def(py::init([](const std::string& pattern, unsigned planes, unsigned sats_per_plane, double altitude_km) {
                 return constellation::ConstellationConfig::preset(parse_pattern(pattern), planes, sats_per_plane,
                                                                   altitude_km);
             }),
             py::arg("pattern") = "star", py::arg("planes") = 3, py::arg("sats_per_plane") = 8,
             py::arg("altitude_km") = 550.0)
        .def_readwrite("altitude_km", &constellation::ConstellationConfig::altitude_km)
        .def_readwrite("inclination_deg", &constellation::ConstellationConfig::inclination_deg)
        .def_readwrite("phasing_factor", &constellation::ConstellationConfig::phasing_factor);

    m.def("intra_plane_latency_ms", &constellation::intra_plane_latency_ms);
    m.def("inter_plane_latency_ms", &constellation::inter_plane_latency_ms, py::arg("config"),
          py::arg("averaging_window_s") = 600.0, py::arg("samples") = 60);
    m.def("satellite_position", [](const constellation::ConstellationConfig& config, unsigned plane, unsigned slot,
                                   double time_s) {
        return constellation::satellite_position(config, plane, slot, time_s).position_km;
    });
    m.def("topology_summary", [](const constellation::ConstellationConfig& config, bool use_presets) {
        const auto graph = constellation::build_topology(
            config, use_presets ? std::optional(constellation::LatencyPresetTable::builtin()) : std::nullopt);
        py::dict out;
        out["nodes"] = graph.node_count;
        out["intra_edges"] = graph.intra_edge_count();
        out["inter_edges"] = graph.inter_edge_count();
        out["connected"] = graph.connected();
        return out;
    }, py::arg("config"), py::arg("use_presets") = true);

    // --- simulation ----------------------------------------------------------
    py::class_<sim::CostModel>(m, "CostModel")
        .def(py::init<>())
        .def_readwrite("contribution_compute_ms", &sim::CostModel::contribution_compute_ms)
        .def_readwrite("point_add_ms", &sim::CostModel::point_add_ms)
        .def_readwrite("hash_ms_per_kb", &sim::CostModel::hash_ms_per_kb)
        .def_readwrite("per_message_overhead_ms", &sim::CostModel::per_message_overhead_ms)
        .def_readwrite("bandwidth_kbps", &sim::CostModel::bandwidth_kbps)
        .def_readwrite("proposer_assembly_ms", &sim::CostModel::proposer_assembly_ms);

    py::class_<sim::ContentionProfile>(m, "ContentionProfile")
        .def(py::init<>())
        .def_readwrite("load_knots", &sim::ContentionProfile::load_knots)
        .def_readwrite("busy_scale", &sim::ContentionProfile::busy_scale)
        .def_readwrite("extra_wait_ms", &sim::ContentionProfile::extra_wait_ms);

    py::class_<sim::CalibratedCostModel>(m, "CalibratedCostModel")
        .def(py::init<>())
        .def_static("defaults", &sim::CalibratedCostModel::defaults)
        .def_static("load", &sim::CalibratedCostModel::load)
        .def_readwrite("version", &sim::CalibratedCostModel::version)
        .def_readwrite("cost", &sim::CalibratedCostModel::cost)
        .def_readwrite("contention", &sim::CalibratedCostModel::contention)
        .def("to_json", &sim::CalibratedCostModel::to_json);

    py::class_<sim::MetricsReport>(m, "MetricsReport")
        .def_property_readonly("mode", [](const sim::MetricsReport& r) { return std::string(sim::to_string(r.mode)); })
        .def_readonly("nodes", &sim::MetricsReport::nodes)
        .def_readonly("seed", &sim::MetricsReport::seed)
        .def_readonly("throughput_tx_per_s", &sim::MetricsReport::throughput_tx_per_s)
        .def_readonly("response_time_s", &sim::MetricsReport::response_time_s)
        .def_readonly("t_blockchain_s", &sim::MetricsReport::t_blockchain_s)
        .def_readonly("committed_tx", &sim::MetricsReport::committed_tx)
        .def_readonly("rounds", &sim::MetricsReport::rounds);

    m.def(
        "run_experiment",
        [](const std::vector<unsigned>& node_counts, const std::string& mode, const sim::CalibratedCostModel& costs,
           const std::vector<std::uint64_t>& seeds, unsigned rounds, const std::string& pattern, bool table_roles) {
            sim::SimulationConfig config;
            config.pattern = parse_pattern(pattern);
            config.roles_from_table = table_roles;
            return sim::run_experiment(node_counts, parse_mode(mode), config, costs, seeds, rounds);
        },
        py::arg("node_counts"), py::arg("mode"), py::arg("costs"), py::arg("seeds"), py::arg("rounds") = 20,
        py::arg("pattern") = "star", py::arg("table_roles") = true);

    m.def(
        "tracking_cycle",
        [](unsigned nodes, const sim::CalibratedCostModel& costs, std::uint64_t seed, double window_s) {
            sim::SimulationConfig config;
            const sim::CycleReport report = sim::tracking_cycle(nodes, config, costs, seed, window_s);
            py::dict out;
            out["nodes"] = report.nodes;
            out["observations"] = report.observations;
            out["committed"] = report.committed;
            out["blocks"] = report.blocks;
            out["commit_time_s"] = report.commit_time_s;
            out["slack_s"] = report.slack_s;
            out["window_s"] = report.window_s;
            return out;
        },
        py::arg("nodes") = 24, py::arg("costs") = sim::CalibratedCostModel::defaults(), py::arg("seed") = 42,
        py::arg("window_s") = sim::kMeasurementWindowS);

    m.def("metrics_csv", [](const std::vector<sim::MetricsReport>& reports) { return cli::metrics_csv(reports); });

    py::register_exception<WindowOverrunError>(m, "WindowOverrun");
    py::register_exception<TooFewNodesError>(m, "TooFewNodes");

    m.attr("MAX_SATELLITES") = sim::kMaxSatellites;
    m.attr("MEASUREMENT_WINDOW_S") = sim::kMeasurementWindowS;
}
