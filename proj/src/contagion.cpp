#include "swcc/contagion.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace swcc {

namespace {

// Owners of weak ties pointing at each node, one entry per tie so that
// multi-edges (variant I) contribute multiplicity. CSR layout.
struct ReverseIndex {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> owners;

    explicit ReverseIndex(const SmallWorldGraph& g) {
        const auto n = static_cast<std::size_t>(g.node_count());
        std::vector<std::size_t> degree(n, 0);
        for (std::size_t u = 0; u < n; ++u)
            for (NodeId t : g.weak_targets(static_cast<NodeId>(u))) ++degree[t];
        offsets.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + degree[v];
        owners.resize(offsets[n]);
        std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
        for (std::size_t u = 0; u < n; ++u)
            for (NodeId t : g.weak_targets(static_cast<NodeId>(u)))
                owners[fill[t]++] = static_cast<NodeId>(u);
    }
};

}  // namespace

ContagionTrace run_contagion(const SmallWorldGraph& graph, int k,
                             const std::vector<NodeId>& seeds, int max_rounds) {
    if (k < 1) throw std::invalid_argument("threshold k must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seed set must be nonempty");
    if (max_rounds < 0) max_rounds = 4 * graph.geometry().side();

    const auto n = static_cast<std::size_t>(graph.node_count());
    ContagionTrace trace;
    trace.threshold = k;
    trace.infected_round.assign(n, -1);
    trace.seeds = seeds;
    std::sort(trace.seeds.begin(), trace.seeds.end());
    trace.seeds.erase(std::unique(trace.seeds.begin(), trace.seeds.end()), trace.seeds.end());
    for (NodeId s : trace.seeds) {
        if (s >= n) throw std::invalid_argument("seed id out of range");
        trace.infected_round[s] = 0;
    }
    trace.infected_count = static_cast<std::int64_t>(trace.seeds.size());

    const ReverseIndex rev(graph);
    std::vector<std::int32_t> counter(n, 0);
    std::vector<NodeId> frontier = trace.seeds;
    std::vector<NodeId> next;

    const auto bump = [&](NodeId u, int round, std::vector<NodeId>& out) {
        if (trace.infected_round[u] >= 0) return;
        if (++counter[u] == k) {
            trace.infected_round[u] = round;
            out.push_back(u);
        }
    };

    for (int round = 1; round <= max_rounds && !frontier.empty(); ++round) {
        next.clear();
        for (NodeId v : frontier) {
            // v's infection reaches nodes that list v among their sources:
            // strong neighbors (symmetric relation) and owners of weak ties
            // targeting v.
            for (NodeId u : graph.strong_neighbors(v)) bump(u, round, next);
            for (std::size_t i = rev.offsets[v]; i < rev.offsets[v + 1]; ++i)
                bump(rev.owners[i], round, next);
        }
        if (next.empty()) break;
        trace.frontier_sizes.push_back(static_cast<std::int64_t>(next.size()));
        trace.infected_count += static_cast<std::int64_t>(next.size());
        trace.rounds_elapsed = round;
        frontier.swap(next);
    }

    trace.covered = trace.infected_count == static_cast<std::int64_t>(n);
    return trace;
}

std::optional<int> rounds_to_full(const ContagionTrace& trace) {
    if (!trace.covered) return std::nullopt;
    return trace.rounds_elapsed;
}

namespace {

// Connected k-cell subsets of the region over the 4-neighborhood, each set
// visited exactly once, rooted at its smallest id (ESU-style enumeration:
// extension candidates must exceed the root and must not touch the current
// subset through an earlier branch).
template <typename Visit>
class ConnectedSubsetScan {
public:
    ConnectedSubsetScan(const TorusGeometry& geom, const std::vector<std::uint8_t>& in_region,
                        int k, Visit& visit)
        : geom_(geom), in_region_(in_region), k_(k), visit_(visit) {}

    void run(const std::vector<NodeId>& region_cells) {
        for (NodeId root : region_cells) {
            chosen_.assign(1, root);
            std::vector<NodeId> ext;
            for (NodeId nb : neighbors4(root))
                if (nb > root && in_region_[nb] && !contains(ext, nb)) ext.push_back(nb);
            extend(root, ext);
        }
    }

private:
    std::array<NodeId, 4> neighbors4(NodeId v) const {
        const Coord c = geom_.coord(v);
        return {geom_.node_id(geom_.wrap(c.x + 1, c.y)), geom_.node_id(geom_.wrap(c.x - 1, c.y)),
                geom_.node_id(geom_.wrap(c.x, c.y + 1)), geom_.node_id(geom_.wrap(c.x, c.y - 1))};
    }

    static bool contains(const std::vector<NodeId>& xs, NodeId v) {
        return std::find(xs.begin(), xs.end(), v) != xs.end();
    }

    bool touches_chosen(NodeId u) const {
        for (NodeId c : chosen_)
            if (u == c || geom_.distance(u, c) == 1) return true;
        return false;
    }

    void extend(NodeId root, std::vector<NodeId> ext) {
        if (static_cast<int>(chosen_.size()) == k_) {
            visit_(chosen_);
            return;
        }
        while (!ext.empty()) {
            const NodeId w = ext.back();
            ext.pop_back();
            std::vector<NodeId> next_ext = ext;
            for (NodeId u : neighbors4(w)) {
                if (u <= root || !in_region_[u]) continue;
                if (touches_chosen(u) || contains(next_ext, u)) continue;
                next_ext.push_back(u);
            }
            chosen_.push_back(w);
            extend(root, std::move(next_ext));
            chosen_.pop_back();
        }
    }

    const TorusGeometry& geom_;
    const std::vector<std::uint8_t>& in_region_;
    int k_;
    Visit& visit_;
    std::vector<NodeId> chosen_;
};

template <typename Visit>
void enumerate_connected(const TorusGeometry& geom, const std::vector<NodeId>& region_cells,
                         const std::vector<std::uint8_t>& in_region, int k, Visit&& visit) {
    ConnectedSubsetScan<std::remove_reference_t<Visit>> scan(geom, in_region, k, visit);
    scan.run(region_cells);
}

}  // namespace

std::optional<SeedClusterHit> detect_new_seed_cluster(const TorusGeometry& geom,
                                                      const ContagionTrace& trace,
                                                      const Square& region, int k,
                                                      int deadline_round) {
    if (k < 1) throw std::invalid_argument("cluster size k must be >= 1");
    std::vector<NodeId> region_cells;
    for (const Coord& c : region.cells(geom)) region_cells.push_back(geom.node_id(c));
    std::vector<std::uint8_t> in_region(static_cast<std::size_t>(geom.node_count()), 0);
    for (NodeId c : region_cells) in_region[c] = 1;

    std::optional<SeedClusterHit> best;
    const auto consider = [&](const std::vector<NodeId>& cells) {
        int round = 0;
        for (NodeId c : cells) {
            const std::int32_t r = trace.infected_round[c];
            if (r < 0) return;
            round = std::max(round, static_cast<int>(r));
        }
        if (round > deadline_round) return;
        if (!best || round < best->round) {
            best = SeedClusterHit{cells, round};
            std::sort(best->cells.begin(), best->cells.end());
        }
    };

    if (k <= 4) {
        enumerate_connected(geom, region_cells, in_region, k, consider);
    } else {
        std::vector<NodeId> run(static_cast<std::size_t>(k));
        for (NodeId base : region_cells) {
            const Coord c = geom.coord(base);
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                const NodeId v = geom.node_id(geom.wrap(c.x + j, c.y));
                if (!in_region[v]) ok = false;
                run[static_cast<std::size_t>(j)] = v;
            }
            if (ok) consider(run);
            ok = true;
            for (int j = 0; j < k && ok; ++j) {
                const NodeId v = geom.node_id(geom.wrap(c.x, c.y + j));
                if (!in_region[v]) ok = false;
                run[static_cast<std::size_t>(j)] = v;
            }
            if (ok) consider(run);
        }
    }
    return best;
}

void write_trace_csv(std::ostream& os, const TorusGeometry& geom, const ContagionTrace& trace) {
    os << "node_x,node_y,infected_round\n";
    const auto n = geom.node_count();
    for (std::int64_t v = 0; v < n; ++v) {
        const Coord c = geom.coord(static_cast<NodeId>(v));
        os << c.x << ',' << c.y << ',';
        if (trace.infected_round[static_cast<std::size_t>(v)] >= 0)
            os << trace.infected_round[static_cast<std::size_t>(v)];
        os << '\n';
    }
}

std::string trace_summary_json(const ContagionTrace& trace) {
    std::ostringstream os;
    os << "{\"covered\":" << (trace.covered ? "true" : "false")
       << ",\"rounds\":" << trace.rounds_elapsed << ",\"frontier_sizes\":[";
    for (std::size_t i = 0; i < trace.frontier_sizes.size(); ++i) {
        if (i) os << ',';
        os << trace.frontier_sizes[i];
    }
    os << "]}";
    return os.str();
}

}  // namespace swcc
