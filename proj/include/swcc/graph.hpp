#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "swcc/torus.hpp"

namespace swcc {

// W: weak ties drawn without replacement (no multi-edges per node).
// I: weak ties drawn independently (repeats permitted).
enum class Variant : std::uint8_t { W, I };

char variant_code(Variant v);
Variant variant_from_code(char c);

// lambda such that lambda * sum_d count(d) * d^-gamma = 1 exactly.
double normalization_constant(const TorusGeometry& geom, double gamma);

// Identifier of the pinned draw procedure (engine + uniform encodings in
// rng.hpp + the distance/displacement two-step below). Recorded in graph
// files so runs stay replayable.
inline constexpr const char* kRngAlgorithmId = "mt19937_64-cd53-v1";

// Inverse-CDF sampler for one weak tie: draw the circular Manhattan distance d
// with probability lambda * count(d) * d^-gamma from a cumulative table, then
// a displacement uniformly among the count(d) displacements at that distance.
class WeakTieSampler {
public:
    WeakTieSampler(const TorusGeometry& geom, double gamma);

    double lambda() const { return lambda_; }
    int draw_distance(std::mt19937_64& gen) const;
    NodeId draw_target(std::mt19937_64& gen, Coord owner) const;

private:
    const TorusGeometry* geom_;
    double lambda_;
    std::vector<double> cumulative_;  // index d, zero where count(d) == 0
};

class SmallWorldGraph {
public:
    // Assembles a graph from explicit per-node tie lists (deserialization and
    // planted test fixtures). Validates lengths, self-loops and the variant-W
    // distinctness rule.
    SmallWorldGraph(std::shared_ptr<const TorusGeometry> geom, int m, double gamma,
                    Variant variant, std::uint64_t rng_seed, std::vector<NodeId> weak_targets,
                    std::string rng_algorithm = kRngAlgorithmId);

    const TorusGeometry& geometry() const { return *geom_; }
    std::shared_ptr<const TorusGeometry> geometry_ptr() const { return geom_; }
    std::int64_t node_count() const { return geom_->node_count(); }
    int m() const { return m_; }
    double gamma() const { return gamma_; }
    Variant variant() const { return variant_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    const std::string& rng_algorithm() const { return rng_algorithm_; }

    // Strong ties are implicit: u ~ v iff 1 <= torus distance <= ceil(sqrt(m)).
    int strong_radius() const { return strong_radius_; }
    bool strong_tied(NodeId u, NodeId v) const {
        const int d = geom_->distance(u, v);
        return d >= 1 && d <= strong_radius_;
    }
    std::vector<NodeId> strong_neighbors(NodeId u) const;
    std::size_t strong_neighbor_count() const { return strong_offsets_.size(); }

    std::span<const NodeId> weak_targets(NodeId u) const {
        return {weak_.data() + static_cast<std::size_t>(u) * m_, static_cast<std::size_t>(m_)};
    }

    // The multiset of nodes whose infection counts toward u's threshold:
    // each strong neighbor once, plus the target of each of u's weak ties
    // (a repeated K^I target appears once per tie). Influence flows against
    // weak-tie direction only; u's own infection never travels u -> target.
    std::vector<NodeId> influence_sources(NodeId u) const;

    std::vector<std::uint8_t> serialize() const;
    static SmallWorldGraph deserialize(std::span<const std::uint8_t> bytes);
    void save(const std::filesystem::path& path) const;
    static SmallWorldGraph load(const std::filesystem::path& path);

    // One "u v" line per weak tie, node ids, row-major owner order.
    void write_edge_list(std::ostream& os) const;

    bool operator==(const SmallWorldGraph& other) const;

private:
    std::shared_ptr<const TorusGeometry> geom_;
    int m_;
    double gamma_;
    Variant variant_;
    std::uint64_t rng_seed_;
    std::string rng_algorithm_;
    int strong_radius_;
    std::vector<Coord> strong_offsets_;  // displacements with 1 <= d <= radius
    std::vector<NodeId> weak_;           // n * m targets, node-major
};

// Samples a fresh graph. Draw order is part of the contract: nodes in
// row-major id order, m ties each; under variant W a tie that duplicates an
// earlier target of the same node is rejected and redrawn (consuming draws).
// Requires m >= 1 and L >= 2*ceil(sqrt(m)) + 1.
SmallWorldGraph generate(std::shared_ptr<const TorusGeometry> geom, int m, double gamma,
                         Variant variant, std::uint64_t rng_seed);
SmallWorldGraph generate(int L, int m, double gamma, Variant variant, std::uint64_t rng_seed);

}  // namespace swcc
