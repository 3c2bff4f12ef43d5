#pragma once

#include <cstdint>
#include <vector>

namespace swcc {

using NodeId = std::uint32_t;

struct Coord {
    int x = 0;
    int y = 0;
    bool operator==(const Coord&) const = default;
};

// Exact geometry of the L x L grid wrapped into a torus under the circular
// Manhattan metric. Immutable after construction; safe to share across threads.
class TorusGeometry {
public:
    explicit TorusGeometry(int side);

    int side() const { return side_; }
    std::int64_t node_count() const { return static_cast<std::int64_t>(side_) * side_; }
    int max_distance() const { return 2 * (side_ / 2); }

    // Row-major node ids: id = y * L + x.
    NodeId node_id(Coord c) const { return static_cast<NodeId>(c.y) * side_ + c.x; }
    Coord coord(NodeId id) const {
        return {static_cast<int>(id % side_), static_cast<int>(id / side_)};
    }
    Coord wrap(int x, int y) const {
        x %= side_; if (x < 0) x += side_;
        y %= side_; if (y < 0) y += side_;
        return {x, y};
    }

    int distance(Coord a, Coord b) const {
        const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
        const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
        return (dx < side_ - dx ? dx : side_ - dx) + (dy < side_ - dy ? dy : side_ - dy);
    }
    int distance(NodeId a, NodeId b) const { return distance(coord(a), coord(b)); }

    // histogram()[d] = number of nonzero displacement vectors of circular
    // Manhattan length d (node-independent by torus symmetry). Sums to n-1.
    const std::vector<std::int64_t>& distance_histogram() const { return histogram_; }

    // The displacement vectors at distance d, stored wrapped into [0, L)^2.
    const std::vector<Coord>& displacements_at(int d) const { return by_distance_[d]; }

private:
    int side_;
    std::vector<std::int64_t> histogram_;
    std::vector<std::vector<Coord>> by_distance_;
};

// An axis-aligned s x s set of coords starting at `origin`, wrapping allowed.
struct Square {
    Coord origin;
    int side = 0;

    bool contains(const TorusGeometry& geom, Coord c) const;
    std::vector<Coord> cells(const TorusGeometry& geom) const;
    bool overlaps(const TorusGeometry& geom, const Square& other) const;
};

struct BlockId {
    int i = 0;
    int j = 0;
    bool operator==(const BlockId&) const = default;
    bool operator<(const BlockId& o) const { return i != o.i ? i < o.i : j < o.j; }
};

// Partition of the grid into ceil(L/block_side)^2 blocks; the last row/column
// of blocks may be ragged when block_side does not divide L.
int blocks_per_side(const TorusGeometry& geom, int block_side);
BlockId block_index(const TorusGeometry& geom, Coord c, int block_side);
// The 8-neighborhood of a block on the wrapped block grid, plus the block
// itself; deduplicated and sorted.
std::vector<BlockId> adjacent_blocks(const TorusGeometry& geom, BlockId b, int block_side);

// The canonical k-seed cluster: a horizontal run anchor, anchor+(1,0), ...
// (mod L). Deterministic; grid-connected for any strong-tie radius >= 1.
// Throws std::invalid_argument when k > L or k < 1.
std::vector<Coord> canonical_seed_cluster(const TorusGeometry& geom, Coord anchor, int k);

// ceil(n^exponent) and the smallest integer strictly greater than n^exponent,
// with near-integer snapping so fp noise cannot move a cutoff off an exact
// power. Length/radius comparisons stay in exact integer arithmetic.
std::int64_t ceil_power(std::int64_t n, double exponent);
std::int64_t strict_above_power(std::int64_t n, double exponent);

}  // namespace swcc
