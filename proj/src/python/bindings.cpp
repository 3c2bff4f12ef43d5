#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <vector>

#include "swcc/analytics.hpp"
#include "swcc/contagion.hpp"
#include "swcc/diagnostics.hpp"
#include "swcc/experiment.hpp"
#include "swcc/graph.hpp"
#include "swcc/infection_dag.hpp"
#include "swcc/rng.hpp"
#include "swcc/torus.hpp"

namespace py = pybind11;
using namespace swcc;

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "k-threshold cascades on small-world tori";

    py::enum_<Variant>(mod, "Variant")
        .value("W", Variant::W)
        .value("I", Variant::I);

    py::enum_<Regime>(mod, "Regime")
        .value("Fast", Regime::Fast)
        .value("Slow", Regime::Slow)
        .value("Unknown", Regime::Unknown);

    py::enum_<TieKind>(mod, "TieKind")
        .value("Strong", TieKind::Strong)
        .value("Weak", TieKind::Weak);

    py::enum_<TieClass>(mod, "TieClass")
        .value("Short", TieClass::Short)
        .value("Long", TieClass::Long);

    py::enum_<EitherOrVerdict>(mod, "EitherOrVerdict")
        .value("Intersects", EitherOrVerdict::Intersects)
        .value("HeavySubset", EitherOrVerdict::HeavySubset)
        .value("Violation", EitherOrVerdict::Violation);

    py::class_<Coord>(mod, "Coord")
        .def(py::init<int, int>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Coord::x)
        .def_readwrite("y", &Coord::y)
        .def("__eq__", [](const Coord& a, const Coord& b) { return a == b; })
        .def("__repr__", [](const Coord& c) {
            return "Coord(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
        });

    py::class_<TorusGeometry, std::shared_ptr<TorusGeometry>>(mod, "TorusGeometry")
        .def(py::init<int>(), py::arg("side"))
        .def_property_readonly("side", &TorusGeometry::side)
        .def_property_readonly("node_count", &TorusGeometry::node_count)
        .def_property_readonly("max_distance", &TorusGeometry::max_distance)
        .def("node_id", &TorusGeometry::node_id, py::arg("coord"))
        .def("coord", &TorusGeometry::coord, py::arg("node"))
        .def("distance",
             [](const TorusGeometry& g, NodeId a, NodeId b) { return g.distance(a, b); },
             py::arg("a"), py::arg("b"))
        .def("distance_histogram",
             [](const TorusGeometry& g) { return g.distance_histogram(); });

    mod.def("normalization_constant", &normalization_constant, py::arg("geometry"),
            py::arg("gamma"));
    mod.def("seed_mix", &seed_mix, py::arg("a"), py::arg("b"));
    mod.def("canonical_seed_cluster", &canonical_seed_cluster, py::arg("geometry"),
            py::arg("anchor"), py::arg("k"));

    py::class_<SmallWorldGraph>(mod, "SmallWorldGraph")
        .def_property_readonly("node_count", &SmallWorldGraph::node_count)
        .def_property_readonly("m", &SmallWorldGraph::m)
        .def_property_readonly("gamma", &SmallWorldGraph::gamma)
        .def_property_readonly("variant", &SmallWorldGraph::variant)
        .def_property_readonly("rng_seed", &SmallWorldGraph::rng_seed)
        .def_property_readonly("strong_radius", &SmallWorldGraph::strong_radius)
        .def_property_readonly("geometry",
                               [](const SmallWorldGraph& g) {
                                   return std::const_pointer_cast<TorusGeometry>(g.geometry_ptr());
                               })
        .def("strong_tied", &SmallWorldGraph::strong_tied, py::arg("u"), py::arg("v"))
        .def("strong_neighbors", &SmallWorldGraph::strong_neighbors, py::arg("u"))
        .def("weak_targets",
             [](const SmallWorldGraph& g, NodeId u) {
                 const auto span = g.weak_targets(u);
                 return std::vector<NodeId>(span.begin(), span.end());
             },
             py::arg("u"))
        .def("influence_sources", &SmallWorldGraph::influence_sources, py::arg("u"))
        .def("save", &SmallWorldGraph::save, py::arg("path"))
        .def_static("load", &SmallWorldGraph::load, py::arg("path"))
        .def("serialize",
             [](const SmallWorldGraph& g) {
                 const auto bytes = g.serialize();
                 return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
             })
        .def_static("deserialize",
                    [](const py::bytes& data) {
                        const std::string_view view = data;
                        return SmallWorldGraph::deserialize(
                            {reinterpret_cast<const std::uint8_t*>(view.data()), view.size()});
                    },
                    py::arg("data"))
        .def("edge_list",
             [](const SmallWorldGraph& g) {
                 std::ostringstream os;
                 g.write_edge_list(os);
                 return os.str();
             })
        .def("__eq__", [](const SmallWorldGraph& a, const SmallWorldGraph& b) { return a == b; });

    mod.def("generate",
            py::overload_cast<int, int, double, Variant, std::uint64_t>(&generate), py::arg("L"),
            py::arg("m"), py::arg("gamma"), py::arg("variant"), py::arg("seed"));

    py::class_<ContagionTrace>(mod, "ContagionTrace")
        .def_readonly("infected_round", &ContagionTrace::infected_round)
        .def_readonly("frontier_sizes", &ContagionTrace::frontier_sizes)
        .def_readonly("seeds", &ContagionTrace::seeds)
        .def_readonly("threshold", &ContagionTrace::threshold)
        .def_readonly("rounds_elapsed", &ContagionTrace::rounds_elapsed)
        .def_readonly("infected_count", &ContagionTrace::infected_count)
        .def_readonly("covered", &ContagionTrace::covered)
        .def("infected", &ContagionTrace::infected, py::arg("v"));

    mod.def("run_contagion", &run_contagion, py::arg("graph"), py::arg("k"), py::arg("seeds"),
            py::arg("max_rounds") = -1);
    mod.def("rounds_to_full", &rounds_to_full, py::arg("trace"));

    py::class_<DagEdge>(mod, "DagEdge")
        .def_readonly("node", &DagEdge::from)
        .def_readonly("infector", &DagEdge::to)
        .def_readonly("kind", &DagEdge::kind)
        .def_readonly("cls", &DagEdge::cls)
        .def_readonly("length", &DagEdge::length);

    py::class_<InfectionDag>(mod, "InfectionDag")
        .def_property_readonly("epsilon", &InfectionDag::epsilon)
        .def_property_readonly("threshold", &InfectionDag::threshold)
        .def_property_readonly("node_count", &InfectionDag::node_count)
        .def_property_readonly("k", &InfectionDag::k)
        .def("infectors",
             [](const InfectionDag& dag, NodeId v) {
                 const auto span = dag.infectors(v);
                 return std::vector<DagEdge>(span.begin(), span.end());
             },
             py::arg("v"))
        .def("round", &InfectionDag::round, py::arg("v"))
        .def("is_seed", &InfectionDag::is_seed, py::arg("v"))
        .def("is_infected", &InfectionDag::is_infected, py::arg("v"));

    mod.def("build_dag", &build_dag, py::arg("graph"), py::arg("trace"), py::arg("k"),
            py::arg("epsilon") = 0.1);
    mod.def("long_tie_threshold", &long_tie_threshold, py::arg("n"), py::arg("epsilon"));
    mod.def("long_tie_floor", &long_tie_floor, py::arg("k"), py::arg("s"));
    mod.def("short_closure", &short_closure, py::arg("dag"), py::arg("s"));
    mod.def("long_tie_count", &long_tie_count, py::arg("graph"), py::arg("dag"), py::arg("s"));

    py::class_<PathTimeReport>(mod, "PathTimeReport")
        .def_readonly("ok", &PathTimeReport::ok)
        .def_readonly("violating_path", &PathTimeReport::violating_path);

    mod.def("check_path_time_consistency", &check_path_time_consistency, py::arg("dag"),
            py::arg("trace"));

    py::class_<EitherOrResult>(mod, "EitherOrResult")
        .def_readonly("verdict", &EitherOrResult::verdict)
        .def_readonly("intersection", &EitherOrResult::intersection)
        .def_readonly("witness", &EitherOrResult::witness)
        .def_readonly("witness_case", &EitherOrResult::witness_case)
        .def_readonly("witness_long_ties", &EitherOrResult::witness_long_ties)
        .def_readonly("violation_reason", &EitherOrResult::violation_reason);

    mod.def("check_either_or", &check_either_or, py::arg("graph"), py::arg("dag"), py::arg("a"),
            py::arg("b"), py::arg("k"));

    py::class_<LongTieFloorReport>(mod, "LongTieFloorReport")
        .def_readonly("ok", &LongTieFloorReport::ok)
        .def_readonly("closure_size", &LongTieFloorReport::closure_size)
        .def_readonly("s", &LongTieFloorReport::s)
        .def_readonly("required", &LongTieFloorReport::required)
        .def_readonly("actual", &LongTieFloorReport::actual);

    mod.def("check_long_tie_floor", &check_long_tie_floor, py::arg("graph"), py::arg("dag"),
            py::arg("s"));

    py::class_<WideBridgeCensus>(mod, "WideBridgeCensus")
        .def_readonly("z1", &WideBridgeCensus::z1)
        .def_readonly("z2", &WideBridgeCensus::z2)
        .def_readonly("radius", &WideBridgeCensus::radius)
        .def_readonly("annulus_size", &WideBridgeCensus::annulus_size)
        .def_readonly("near_disk_size", &WideBridgeCensus::near_disk_size);

    mod.def("wide_bridge_census", &wide_bridge_census, py::arg("graph"), py::arg("center"),
            py::arg("delta"), py::arg("k"));

    py::class_<TrialEstimate>(mod, "TrialEstimate")
        .def_readonly("trials", &TrialEstimate::trials)
        .def_readonly("successes", &TrialEstimate::successes)
        .def_readonly("success_rate", &TrialEstimate::success_rate)
        .def_readonly("ci_lo", &TrialEstimate::ci_lo)
        .def_readonly("ci_hi", &TrialEstimate::ci_hi)
        .def_readonly("subsquare_side", &TrialEstimate::subsquare_side);

    mod.def("recursive_spreading_trial", &recursive_spreading_trial, py::arg("L"), py::arg("m"),
            py::arg("gamma"), py::arg("variant"), py::arg("k"), py::arg("delta"),
            py::arg("trials"), py::arg("rng_seed"));
    mod.def("wilson_interval",
            [](int successes, int trials) {
                double lo = 0.0, hi = 0.0;
                wilson_interval(successes, trials, lo, hi);
                return py::make_tuple(lo, hi);
            },
            py::arg("successes"), py::arg("trials"));

    py::class_<Rational>(mod, "Rational")
        .def_readonly("num", &Rational::num)
        .def_readonly("den", &Rational::den)
        .def_property_readonly("value", &Rational::value)
        .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; })
        .def("__repr__", [](const Rational& r) {
            return std::to_string(r.num) + "/" + std::to_string(r.den);
        });

    mod.def("alpha_k", &alpha_k, py::arg("k"));
    mod.def("beta_k", &beta_k, py::arg("k"));

    py::class_<RegimeVerdict>(mod, "RegimeVerdict")
        .def_readonly("regime", &RegimeVerdict::regime)
        .def_readonly("justification", &RegimeVerdict::justification);

    mod.def("classify_regime", &classify_regime, py::arg("variant"), py::arg("gamma"),
            py::arg("k"));

    py::class_<BoundParams>(mod, "BoundParams")
        .def(py::init<>())
        .def_readwrite("k", &BoundParams::k)
        .def_readwrite("gamma", &BoundParams::gamma)
        .def_readwrite("delta", &BoundParams::delta)
        .def_readwrite("ell", &BoundParams::ell)
        .def_readwrite("lambda_", &BoundParams::lambda)
        .def_readwrite("c", &BoundParams::c)
        .def_readwrite("d", &BoundParams::d)
        .def_readwrite("epsilon", &BoundParams::epsilon)
        .def_readwrite("zeta", &BoundParams::zeta);

    py::class_<P5Chain>(mod, "P5Chain")
        .def_readonly("p1", &P5Chain::p1)
        .def_readonly("p2", &P5Chain::p2)
        .def_readonly("q", &P5Chain::q)
        .def_readonly("p4", &P5Chain::p4)
        .def_readonly("p5", &P5Chain::p5)
        .def_readonly("subsquare_size", &P5Chain::subsquare_size);

    mod.def("p5_lower_bound_W", &p5_lower_bound_W, py::arg("params"));
    mod.def("p5_lower_bound_I", &p5_lower_bound_I, py::arg("params"));

    py::class_<ZBounds>(mod, "ZBounds")
        .def_readonly("z1_order", &ZBounds::z1_order)
        .def_readonly("z2_order", &ZBounds::z2_order)
        .def_readonly("delta_max", &ZBounds::delta_max)
        .def_readonly("z1_branch", &ZBounds::z1_branch);

    mod.def("z_expectation_bounds", &z_expectation_bounds, py::arg("n"), py::arg("gamma"),
            py::arg("k"), py::arg("delta"), py::arg("eps"));

    py::class_<HeavySubsetBound>(mod, "HeavySubsetBound")
        .def_readonly("p1_order", &HeavySubsetBound::p1_order)
        .def_readonly("p2_order", &HeavySubsetBound::p2_order)
        .def_readonly("p3_order", &HeavySubsetBound::p3_order)
        .def_readonly("zeta_lo", &HeavySubsetBound::zeta_lo)
        .def_readonly("zeta_hi", &HeavySubsetBound::zeta_hi)
        .def_readonly("zeta_nonempty", &HeavySubsetBound::zeta_nonempty);

    mod.def("heavy_subset_probability_bound", &heavy_subset_probability_bound, py::arg("n"),
            py::arg("gamma"), py::arg("k"), py::arg("eps"), py::arg("m"));

    py::class_<FitResult>(mod, "FitResult")
        .def_readonly("exponent", &FitResult::exponent)
        .def_readonly("stderr", &FitResult::stderr_value)
        .def_readonly("r_squared", &FitResult::r_squared);

    mod.def("fit_scaling_exponent", &fit_scaling_exponent, py::arg("samples"));

    py::class_<ExperimentSpec>(mod, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("schema_version", &ExperimentSpec::schema_version)
        .def_readwrite("variants", &ExperimentSpec::variants)
        .def_readwrite("l_values", &ExperimentSpec::l_values)
        .def_readwrite("m", &ExperimentSpec::m)
        .def_readwrite("k", &ExperimentSpec::k)
        .def_readwrite("gammas", &ExperimentSpec::gammas)
        .def_readwrite("replicas", &ExperimentSpec::replicas)
        .def_readwrite("base_seed", &ExperimentSpec::base_seed)
        .def_readwrite("max_rounds", &ExperimentSpec::max_rounds)
        .def_readwrite("dag_checks", &ExperimentSpec::dag_checks)
        .def_readwrite("dag_epsilon", &ExperimentSpec::dag_epsilon)
        .def_readwrite("census", &ExperimentSpec::census)
        .def_readwrite("census_delta", &ExperimentSpec::census_delta)
        .def_readwrite("threads", &ExperimentSpec::threads);

    mod.def("spec_from_json", &spec_from_json, py::arg("text"));
    mod.def("spec_to_json", &spec_to_json, py::arg("spec"));

    py::class_<ExperimentRecord>(mod, "ExperimentRecord")
        .def_readonly("variant", &ExperimentRecord::variant)
        .def_readonly("l", &ExperimentRecord::l)
        .def_readonly("m", &ExperimentRecord::m)
        .def_readonly("k", &ExperimentRecord::k)
        .def_readonly("gamma", &ExperimentRecord::gamma)
        .def_readonly("point", &ExperimentRecord::point)
        .def_readonly("replica", &ExperimentRecord::replica)
        .def_readonly("rng_seed", &ExperimentRecord::rng_seed)
        .def_readonly("covered", &ExperimentRecord::covered)
        .def_readonly("rounds", &ExperimentRecord::rounds)
        .def_readonly("infected", &ExperimentRecord::infected)
        .def_readonly("coverage_fraction", &ExperimentRecord::coverage_fraction)
        .def_readonly("wall_ms", &ExperimentRecord::wall_ms)
        .def_readonly("dag_checked", &ExperimentRecord::dag_checked)
        .def_readonly("dag_ok", &ExperimentRecord::dag_ok)
        .def_readonly("census_checked", &ExperimentRecord::census_checked)
        .def_readonly("census_z1", &ExperimentRecord::census_z1)
        .def_readonly("census_z2", &ExperimentRecord::census_z2)
        .def_readonly("error", &ExperimentRecord::error);

    mod.def("run_sweep", &run_sweep, py::arg("spec"),
            py::call_guard<py::gil_scoped_release>());
    mod.def("median_rounds", &median_rounds, py::arg("records"), py::arg("variant"),
            py::arg("gamma"), py::arg("L"));
}
