#include "swcc/infection_dag.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace swcc {

std::int64_t long_tie_threshold(std::int64_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    return ceil_power(n, 0.5 - epsilon);
}

namespace {

struct Candidate {
    std::int32_t round;
    NodeId id;
    std::uint8_t kind_rank;  // strong 0, weak 1
    int slot;

    bool operator<(const Candidate& o) const {
        if (round != o.round) return round < o.round;
        if (id != o.id) return id < o.id;
        if (kind_rank != o.kind_rank) return kind_rank < o.kind_rank;
        return slot < o.slot;
    }
};

}  // namespace

InfectionDag build_dag(const SmallWorldGraph& graph, const ContagionTrace& trace, int k,
                       double epsilon) {
    const auto n = static_cast<std::size_t>(graph.node_count());
    if (trace.infected_round.size() != n)
        throw std::invalid_argument("trace size does not match graph");
    if (k < 1) throw std::invalid_argument("k must be >= 1");

    InfectionDag dag;
    dag.epsilon_ = epsilon;
    dag.threshold_ = long_tie_threshold(graph.node_count(), epsilon);
    dag.k_ = k;
    dag.round_.assign(trace.infected_round.begin(), trace.infected_round.end());
    dag.seed_.assign(n, 0);
    for (NodeId s : trace.seeds) {
        if (s >= n || trace.infected_round[s] != 0)
            throw std::invalid_argument("seed list inconsistent with rounds");
        dag.seed_[s] = 1;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (trace.infected_round[v] == 0 && !dag.seed_[v])
            throw std::invalid_argument("round-0 node missing from seed list");
        if (trace.infected_round[v] >= 0) dag.infected_.push_back(static_cast<NodeId>(v));
    }
    std::sort(dag.infected_.begin(), dag.infected_.end(), [&](NodeId a, NodeId b) {
        if (dag.round_[a] != dag.round_[b]) return dag.round_[a] < dag.round_[b];
        return a < b;
    });

    const auto& geom = graph.geometry();
    std::vector<Candidate> cands;
    for (NodeId v : dag.infected_) {
        if (dag.seed_[v]) continue;
        const std::int32_t rv = dag.round_[v];
        cands.clear();
        {
            int slot = 0;
            for (NodeId u : graph.strong_neighbors(v)) {
                if (dag.round_[u] >= 0 && dag.round_[u] < rv)
                    cands.push_back({dag.round_[u], u, 0, slot});
                ++slot;
            }
        }
        {
            const auto weak = graph.weak_targets(v);
            for (int slot = 0; slot < static_cast<int>(weak.size()); ++slot) {
                const NodeId u = weak[static_cast<std::size_t>(slot)];
                if (dag.round_[u] >= 0 && dag.round_[u] < rv)
                    cands.push_back({dag.round_[u], u, 1, slot});
            }
        }
        if (static_cast<int>(cands.size()) < k)
            throw std::runtime_error("trace/graph mismatch: infected node lacks k earlier sources");
        std::sort(cands.begin(), cands.end());
        for (int i = 0; i < k; ++i) {
            const Candidate& c = cands[static_cast<std::size_t>(i)];
            const int len = geom.distance(v, c.id);
            const TieKind kind = c.kind_rank == 0 ? TieKind::Strong : TieKind::Weak;
            const TieClass cls = (kind == TieKind::Weak && len >= dag.threshold_)
                                     ? TieClass::Long
                                     : TieClass::Short;
            dag.edges_.push_back({v, c.id, kind, cls, len});
        }
    }
    // Edges were appended in infected order; rebuild CSR offsets by node id.
    {
        std::vector<DagEdge> flat(dag.edges_.size());
        std::vector<std::size_t> counts(n + 1, 0);
        for (const DagEdge& e : dag.edges_) ++counts[e.from + 1];
        for (std::size_t v = 0; v < n; ++v) counts[v + 1] += counts[v];
        dag.offsets_ = counts;
        std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
        for (const DagEdge& e : dag.edges_) flat[fill[e.from]++] = e;
        dag.edges_ = std::move(flat);
    }
    return dag;
}

std::vector<NodeId> short_closure(const InfectionDag& dag, const std::vector<NodeId>& s) {
    const auto n = static_cast<std::size_t>(dag.node_count());
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<NodeId> stack;
    for (NodeId v : s) {
        if (v >= n || !dag.is_infected(v))
            throw std::invalid_argument("closure source must be an infected node");
        if (!seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
        }
    }
    std::vector<NodeId> out;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (const DagEdge& e : dag.infectors(v)) {
            if (e.cls != TieClass::Short || seen[e.to]) continue;
            seen[e.to] = 1;
            stack.push_back(e.to);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t long_tie_count(const SmallWorldGraph& graph, const InfectionDag& dag,
                            const std::vector<NodeId>& s) {
    const auto closure = short_closure(dag, s);
    const auto n = static_cast<std::size_t>(graph.node_count());
    std::vector<std::uint8_t> in_closure(n, 0);
    for (NodeId v : closure) in_closure[v] = 1;
    const auto& geom = graph.geometry();
    std::int64_t count = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (NodeId t : graph.weak_targets(static_cast<NodeId>(u))) {
            if (!in_closure[u] && !in_closure[t]) continue;
            if (geom.distance(static_cast<NodeId>(u), t) >= dag.threshold()) ++count;
        }
    }
    return count;
}

PathTimeReport check_path_time_consistency(const InfectionDag& dag, const ContagionTrace& trace) {
    const auto n = static_cast<std::size_t>(dag.node_count());
    if (trace.infected_round.size() != n)
        throw std::invalid_argument("trace size does not match dag");
    for (std::size_t v = 0; v < n; ++v)
        if (trace.infected_round[v] != dag.round(static_cast<NodeId>(v)))
            throw std::invalid_argument("trace rounds do not match dag");

    // depth[v] = max over paths from v of (path length + round of endpoint).
    // Consistency means depth[v] == round(v) everywhere.
    std::vector<std::int64_t> depth(n, 0);
    std::vector<NodeId> best_child(n, 0);
    std::vector<std::uint8_t> has_child(n, 0);
    PathTimeReport report;
    for (NodeId v : dag.infected_by_round()) {
        std::int64_t d = dag.round(v);
        for (const DagEdge& e : dag.infectors(v)) {
            const std::int64_t cand = 1 + depth[e.to];
            if (cand > d) {
                d = cand;
                best_child[v] = e.to;
                has_child[v] = 1;
            }
        }
        depth[v] = d;
        if (report.ok && d > dag.round(v)) {
            report.ok = false;
            NodeId cur = v;
            report.violating_path.push_back(cur);
            while (has_child[cur]) {
                cur = best_child[cur];
                report.violating_path.push_back(cur);
            }
        }
    }
    return report;
}

std::int64_t long_tie_floor(int k, int s) {
    if (s < 0 || s > k) throw std::invalid_argument("need 0 <= s <= k");
    return static_cast<std::int64_t>(s) * k - static_cast<std::int64_t>(s) * (s - 1) / 2;
}

namespace {

bool connected_undirected(const SmallWorldGraph& graph, const std::vector<NodeId>& nodes) {
    if (nodes.empty()) return false;
    const auto adjacent = [&](NodeId u, NodeId v) {
        if (graph.strong_tied(u, v)) return true;
        const auto wu = graph.weak_targets(u);
        if (std::find(wu.begin(), wu.end(), v) != wu.end()) return true;
        const auto wv = graph.weak_targets(v);
        return std::find(wv.begin(), wv.end(), u) != wv.end();
    };
    std::vector<std::uint8_t> seen(nodes.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (seen[j] || !adjacent(nodes[i], nodes[j])) continue;
            seen[j] = 1;
            ++visited;
            stack.push_back(j);
        }
    }
    return visited == nodes.size();
}

std::vector<NodeId> sorted_by_round(const InfectionDag& dag, std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        if (dag.round(a) != dag.round(b)) return dag.round(a) < dag.round(b);
        return a < b;
    });
    return nodes;
}

}  // namespace

EitherOrResult check_either_or(const SmallWorldGraph& graph, const InfectionDag& dag,
                               const std::vector<NodeId>& a, const std::vector<NodeId>& b, int k) {
    if (graph.variant() != Variant::W)
        throw std::invalid_argument("either-or certification is defined for variant W only");
    if (b.empty()) throw std::invalid_argument("B must be nonempty");
    for (NodeId v : b)
        if (!dag.is_infected(v)) throw std::invalid_argument("B must be fully infected");

    EitherOrResult result;
    const auto closure_b = short_closure(dag, b);
    {
        std::vector<NodeId> sa = a;
        std::sort(sa.begin(), sa.end());
        std::set_intersection(sa.begin(), sa.end(), closure_b.begin(), closure_b.end(),
                              std::back_inserter(result.intersection));
    }
    if (!result.intersection.empty()) {
        result.verdict = EitherOrVerdict::Intersects;
        return result;
    }

    // No seed feeds B through short ties; extract the heavy witness the same
    // way the dichotomy's proof does.
    std::vector<NodeId> witness;
    for (NodeId v : sorted_by_round(dag, b)) {
        const auto av = short_closure(dag, {v});
        if (static_cast<int>(av.size()) < k) continue;
        for (NodeId u : sorted_by_round(dag, av)) {
            const auto au = short_closure(dag, {u});
            if (static_cast<int>(au.size()) >= k) {
                witness = au;
                result.witness_case = 1;
                break;
            }
        }
        break;
    }
    if (witness.empty()) {
        witness = closure_b;
        result.witness_case = 2;
    }

    result.witness = witness;
    result.witness_long_ties = long_tie_count(graph, dag, witness);
    const auto size_bound = static_cast<std::int64_t>(k) * k - k + 1;
    const std::int64_t tie_bound = static_cast<std::int64_t>(k) * (k + 1) / 2;
    if (static_cast<std::int64_t>(witness.size()) > size_bound)
        result.violation_reason = "witness exceeds size bound";
    else if (!connected_undirected(graph, witness))
        result.violation_reason = "witness is not connected";
    else if (result.witness_long_ties < tie_bound)
        result.violation_reason = "witness carries too few long ties";
    result.verdict = result.violation_reason.empty() ? EitherOrVerdict::HeavySubset
                                                     : EitherOrVerdict::Violation;
    return result;
}

LongTieFloorReport check_long_tie_floor(const SmallWorldGraph& graph, const InfectionDag& dag,
                                        const std::vector<NodeId>& s) {
    const auto closure = short_closure(dag, s);
    for (NodeId v : closure)
        if (dag.is_seed(v))
            throw std::invalid_argument("short closure touches a seed; floor does not apply");
    LongTieFloorReport report;
    report.closure_size = static_cast<std::int64_t>(closure.size());
    report.s = static_cast<int>(std::min<std::int64_t>(dag.k(), report.closure_size));
    report.required = long_tie_floor(dag.k(), report.s);
    report.actual = long_tie_count(graph, dag, s);
    report.ok = report.actual >= report.required;
    return report;
}

void write_dag_csv(std::ostream& os, const InfectionDag& dag) {
    os << "node,infector,tie_kind,length,tie_class\n";
    for (NodeId v : dag.infected_by_round()) {
        for (const DagEdge& e : dag.infectors(v)) {
            os << e.from << ',' << e.to << ',' << (e.kind == TieKind::Strong ? "strong" : "weak")
               << ',' << e.length << ',' << (e.cls == TieClass::Long ? "long" : "short") << '\n';
        }
    }
}

}  // namespace swcc
