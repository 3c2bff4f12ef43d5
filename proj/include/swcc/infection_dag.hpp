#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swcc/contagion.hpp"
#include "swcc/graph.hpp"
#include "swcc/torus.hpp"

namespace swcc {

enum class TieKind : std::uint8_t { Strong, Weak };
enum class TieClass : std::uint8_t { Short, Long };

// A weak tie of Manhattan length >= ceil(n^(1/2-eps)) is long; everything
// else, grid edges included, is short. Exact integer threshold.
std::int64_t long_tie_threshold(std::int64_t n, double epsilon);

struct DagEdge {
    NodeId from;   // the infected node
    NodeId to;     // one of its k chosen infectors
    TieKind kind;
    TieClass cls;
    int length;    // torus Manhattan distance
};

// Route-of-infection DAG: every infected non-seed node points to the k
// sources that first caused its infection, by ascending (round, id), strong
// edges before weak, weak by tie slot. Multi-edges fill one slot per tie.
class InfectionDag {
public:
    double epsilon() const { return epsilon_; }
    std::int64_t threshold() const { return threshold_; }
    std::int64_t node_count() const { return static_cast<std::int64_t>(offsets_.size()) - 1; }
    int k() const { return k_; }

    std::span<const DagEdge> infectors(NodeId v) const {
        return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
    }
    std::int32_t round(NodeId v) const { return round_[v]; }
    bool is_seed(NodeId v) const { return seed_[v] != 0; }
    bool is_infected(NodeId v) const { return round_[v] >= 0; }
    // Infected nodes ascending by (round, id): a topological order of the
    // reversed DAG (every edge goes to a strictly earlier round).
    const std::vector<NodeId>& infected_by_round() const { return infected_; }
    const std::vector<DagEdge>& edges() const { return edges_; }

private:
    friend InfectionDag build_dag(const SmallWorldGraph&, const ContagionTrace&, int, double);
    double epsilon_ = 0.1;
    std::int64_t threshold_ = 0;
    int k_ = 1;
    std::vector<std::size_t> offsets_;
    std::vector<DagEdge> edges_;
    std::vector<std::int32_t> round_;
    std::vector<std::uint8_t> seed_;
    std::vector<NodeId> infected_;
};

// Throws if the trace is not a valid run of the graph at threshold k (a node
// reporting round t without k earlier-infected sources, size mismatch, ...).
InfectionDag build_dag(const SmallWorldGraph& graph, const ContagionTrace& trace, int k,
                       double epsilon = 0.1);

// Forward reachability from S along short dag-edges only. S must consist of
// infected nodes. Result is sorted and contains S.
std::vector<NodeId> short_closure(const InfectionDag& dag, const std::vector<NodeId>& s);

// Number of long weak ties incident (as owner or target) to the short
// closure of S, each tie counted once.
std::int64_t long_tie_count(const SmallWorldGraph& graph, const InfectionDag& dag,
                            const std::vector<NodeId>& s);

struct PathTimeReport {
    bool ok = true;
    std::vector<NodeId> violating_path;  // from latest node down to the ancestor
};

// Along every directed path the infection rounds must drop by at least one
// per edge; checked exactly via longest-path DP over the whole DAG.
PathTimeReport check_path_time_consistency(const InfectionDag& dag, const ContagionTrace& trace);

enum class EitherOrVerdict : std::uint8_t { Intersects, HeavySubset, Violation };

struct EitherOrResult {
    EitherOrVerdict verdict;
    std::vector<NodeId> intersection;   // verdict Intersects
    std::vector<NodeId> witness;        // verdict HeavySubset: the certified subset
    int witness_case = 0;               // 1 = minimal heavy node closure, 2 = closure of B
    std::int64_t witness_long_ties = 0;
    std::string violation_reason;
};

// Certified dichotomy for variant W: either the seed set A meets the short
// closure of B, or there is a connected subset of size <= k^2-k+1 carrying
// >= k(k+1)/2 long ties. The counting behind the second branch assumes each
// infected node drew its k infector slots from k distinct nodes. A weak tie
// that lands on a strong neighbor breaks that: the neighbor fills two slots,
// a closure can bottom out after one hop, and Violation is then a property of
// the multiplicity rule, not a bug. Callers should treat a Violation whose
// witness has a repeated infector target as outside the certified counting;
// any other Violation is a bug. Throws on variant I and when B is not fully
// infected.
EitherOrResult check_either_or(const SmallWorldGraph& graph, const InfectionDag& dag,
                               const std::vector<NodeId>& a, const std::vector<NodeId>& b, int k);

// k + (k-1) + ... + (k-s+1)
std::int64_t long_tie_floor(int k, int s);

struct LongTieFloorReport {
    bool ok = true;
    std::int64_t closure_size = 0;
    int s = 0;
    std::int64_t required = 0;
    std::int64_t actual = 0;
};

// For S with a seed-free short closure: long_tie_count(S) must reach the
// floor for s = min(k, |A(S)|). Throws if the closure touches a seed.
LongTieFloorReport check_long_tie_floor(const SmallWorldGraph& graph, const InfectionDag& dag,
                                        const std::vector<NodeId>& s);

// CSV columns: node, infector, tie_kind, length, tie_class.
void write_dag_csv(std::ostream& os, const InfectionDag& dag);

}  // namespace swcc
