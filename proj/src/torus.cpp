#include "swcc/torus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swcc {

TorusGeometry::TorusGeometry(int side) : side_(side) {
    if (side < 2) throw std::invalid_argument("TorusGeometry: side must be >= 2");
    histogram_.assign(max_distance() + 1, 0);
    by_distance_.assign(max_distance() + 1, {});
    // Exact enumeration of all L^2 - 1 displacement vectors, done once per L;
    // every closed form downstream reads this table instead of re-deriving
    // wraparound cases.
    for (int dx = 0; dx < side_; ++dx) {
        for (int dy = 0; dy < side_; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int d = std::min(dx, side_ - dx) + std::min(dy, side_ - dy);
            ++histogram_[d];
            by_distance_[d].push_back({dx, dy});
        }
    }
}

bool Square::contains(const TorusGeometry& geom, Coord c) const {
    const int L = geom.side();
    const int rx = ((c.x - origin.x) % L + L) % L;
    const int ry = ((c.y - origin.y) % L + L) % L;
    return rx < side && ry < side;
}

std::vector<Coord> Square::cells(const TorusGeometry& geom) const {
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(side) * side);
    for (int dy = 0; dy < side; ++dy)
        for (int dx = 0; dx < side; ++dx)
            out.push_back(geom.wrap(origin.x + dx, origin.y + dy));
    return out;
}

bool Square::overlaps(const TorusGeometry& geom, const Square& other) const {
    for (const Coord c : other.cells(geom))
        if (contains(geom, c)) return true;
    return false;
}

int blocks_per_side(const TorusGeometry& geom, int block_side) {
    if (block_side < 1 || block_side > geom.side())
        throw std::invalid_argument("block_side must be in [1, L]");
    return (geom.side() + block_side - 1) / block_side;
}

BlockId block_index(const TorusGeometry& geom, Coord c, int block_side) {
    blocks_per_side(geom, block_side);  // validates
    return {c.x / block_side, c.y / block_side};
}

std::vector<BlockId> adjacent_blocks(const TorusGeometry& geom, BlockId b, int block_side) {
    const int B = blocks_per_side(geom, block_side);
    std::vector<BlockId> out;
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            out.push_back({((b.i + di) % B + B) % B, ((b.j + dj) % B + B) % B});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Coord> canonical_seed_cluster(const TorusGeometry& geom, Coord anchor, int k) {
    if (k < 1 || k > geom.side())
        throw std::invalid_argument("canonical_seed_cluster: need 1 <= k <= L, got k=" +
                                    std::to_string(k));
    std::vector<Coord> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(geom.wrap(anchor.x + i, anchor.y));
    return out;
}

namespace {

long double snapped_power(std::int64_t n, double exponent) {
    if (n < 1) throw std::invalid_argument("power base must be positive");
    const long double t = std::pow(static_cast<long double>(n), static_cast<long double>(exponent));
    const long double nearest = std::round(t);
    if (std::abs(t - nearest) < 1e-9L * std::max(1.0L, t)) return nearest;
    return t;
}

}  // namespace

std::int64_t ceil_power(std::int64_t n, double exponent) {
    return static_cast<std::int64_t>(std::ceil(snapped_power(n, exponent)));
}

std::int64_t strict_above_power(std::int64_t n, double exponent) {
    return static_cast<std::int64_t>(std::floor(snapped_power(n, exponent))) + 1;
}

}  // namespace swcc
