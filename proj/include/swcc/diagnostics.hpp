#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swcc/contagion.hpp"
#include "swcc/graph.hpp"
#include "swcc/torus.hpp"

namespace swcc {

struct WideBridgeCensus {
    std::int64_t z1 = 0;          // annulus nodes with >= k weak ties into the disk
    std::int64_t z2 = 0;          // near-disk nodes with >= k weak ties into the disk
    std::int64_t radius = 0;      // disk radius ceil(n^delta)
    std::int64_t annulus_size = 0;
    std::int64_t near_disk_size = 0;
};

// Disk D = {dist <= r}, near disk = {dist <= 2r}, annulus = {2r < dist},
// r = ceil(n^delta), distances to `center`. Counts the nodes that could relay
// a k-threshold cascade into D through weak ties alone.
WideBridgeCensus wide_bridge_census(const SmallWorldGraph& graph, Coord center, double delta,
                                    int k);

struct BlockCensusReport {
    std::vector<NodeId> violating_nodes;  // own >= k weak ties longer than n^(1/2-delta)
    bool any = false;
    std::int64_t min_long_length = 0;     // smallest tie length that counts
    int block_side = 0;                   // ceil(n^(1/2-delta))
    bool trace_checked = false;
    bool block_spread_ok = true;          // meaningful when trace_checked
    int first_bad_round = -1;
    BlockId first_bad_block;
};

// Nodes owning >= k weak ties of length > n^(1/2-delta). With a trace and an
// empty violator list, additionally verifies round-by-round that infection
// only ever enters blocks adjacent (8-neighborhood, wrapped) to blocks
// touched in earlier rounds.
BlockCensusReport long_tie_block_census(const SmallWorldGraph& graph, double delta, int k,
                                        const ContagionTrace* trace = nullptr);

struct HeavySubsetWitness {
    std::vector<NodeId> nodes;  // sorted; connected in the undirected strong+weak view
    std::int64_t long_ties = 0;
};

// Exact search for a connected node set of size <= k^2-k+1 incident to at
// least k(k+1)/2 weak ties of length >= n^(1/2-eps). Searches from every node
// incident to a long tie. k in {2, 3} only.
std::optional<HeavySubsetWitness> heavy_connected_subset_search(const SmallWorldGraph& graph,
                                                                int k, double epsilon);

struct TrialEstimate {
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double ci_lo = 0.0;  // Wilson 95% interval
    double ci_hi = 0.0;
    int subsquare_side = 0;
};

// Monte Carlo estimate of one recursion step: per trial, sample a fresh
// graph, seed the full subsquare A, run exactly k rounds and test for a
// fully infected k-cell connected cluster in the far subsquare B. Subsquares
// have side max(k, floor(L^(1-delta))); A sits at the origin, B diagonally
// opposite. Throws when the two subsquares cannot be disjoint.
TrialEstimate recursive_spreading_trial(int L, int m, double gamma, Variant variant, int k,
                                        double delta, int trials, std::uint64_t rng_seed);

// Wilson 95% score interval, exposed for reuse in reports.
void wilson_interval(int successes, int trials, double& lo, double& hi);

}  // namespace swcc
