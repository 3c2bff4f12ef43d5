#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swcc/graph.hpp"
#include "swcc/torus.hpp"

namespace swcc {

struct ContagionTrace {
    std::vector<std::int32_t> infected_round;  // -1 = never infected, seeds = 0
    std::vector<std::int64_t> frontier_sizes;  // frontier_sizes[r-1] = newly infected at round r
    std::vector<NodeId> seeds;                 // sorted, deduplicated
    int threshold = 1;
    int rounds_elapsed = 0;
    std::int64_t infected_count = 0;
    bool covered = false;

    bool infected(NodeId v) const { return infected_round[v] >= 0; }
};

// Synchronous threshold dynamics: at round t every uninfected node with at
// least k infected influence sources (multiplicity-aware) at round t-1 becomes
// infected. Stops on an empty frontier, full coverage, or max_rounds.
// max_rounds < 0 selects the default 4*L.
ContagionTrace run_contagion(const SmallWorldGraph& graph, int k,
                             const std::vector<NodeId>& seeds, int max_rounds = -1);

// rounds_elapsed iff the cascade covered every node.
std::optional<int> rounds_to_full(const ContagionTrace& trace);

struct SeedClusterHit {
    std::vector<NodeId> cells;  // sorted ids
    int round;                  // max infection round over the cells
};

// Earliest round <= deadline_round at which some k-cell grid-connected set
// inside region is fully infected. Scans horizontal and vertical runs of
// length k for every k, and additionally every connected k-cell shape when
// k <= 4. Ties broken by scan order, so the result is deterministic.
std::optional<SeedClusterHit> detect_new_seed_cluster(const TorusGeometry& geom,
                                                      const ContagionTrace& trace,
                                                      const Square& region, int k,
                                                      int deadline_round);

// CSV columns: node_x, node_y, infected_round (empty when never infected).
void write_trace_csv(std::ostream& os, const TorusGeometry& geom, const ContagionTrace& trace);

// {"covered": ..., "rounds": ..., "frontier_sizes": [...]}
std::string trace_summary_json(const ContagionTrace& trace);

}  // namespace swcc
