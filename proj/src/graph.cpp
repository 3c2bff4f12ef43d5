#include "swcc/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "swcc/rng.hpp"

namespace swcc {

char variant_code(Variant v) { return v == Variant::W ? 'W' : 'I'; }

Variant variant_from_code(char c) {
    if (c == 'W') return Variant::W;
    if (c == 'I') return Variant::I;
    throw std::invalid_argument("unknown variant code");
}

double normalization_constant(const TorusGeometry& geom, double gamma) {
    const auto& hist = geom.distance_histogram();
    double sum = 0.0;
    for (std::size_t d = 1; d < hist.size(); ++d) {
        if (hist[d] == 0) continue;
        sum += static_cast<double>(hist[d]) * std::pow(static_cast<double>(d), -gamma);
    }
    return 1.0 / sum;
}

WeakTieSampler::WeakTieSampler(const TorusGeometry& geom, double gamma) : geom_(&geom) {
    const auto& hist = geom.distance_histogram();
    lambda_ = normalization_constant(geom, gamma);
    cumulative_.assign(hist.size(), 0.0);
    double acc = 0.0;
    for (std::size_t d = 1; d < hist.size(); ++d) {
        if (hist[d] > 0)
            acc += lambda_ * static_cast<double>(hist[d]) * std::pow(static_cast<double>(d), -gamma);
        cumulative_[d] = acc;
    }
    cumulative_.back() = 1.0;  // guard against rounding shortfall at the tail
}

int WeakTieSampler::draw_distance(std::mt19937_64& gen) const {
    const double u = canonical_double(gen);
    const auto it = std::upper_bound(cumulative_.begin() + 1, cumulative_.end(), u);
    auto d = static_cast<std::size_t>(it - cumulative_.begin());
    // Skip distances the torus does not realize (zero-width CDF steps).
    const auto& hist = geom_->distance_histogram();
    while (d < hist.size() && hist[d] == 0) ++d;
    if (d >= hist.size()) d = hist.size() - 1;
    return static_cast<int>(d);
}

NodeId WeakTieSampler::draw_target(std::mt19937_64& gen, Coord owner) const {
    const int d = draw_distance(gen);
    const auto& disp = geom_->displacements_at(d);
    const auto idx = uniform_below(gen, disp.size());
    const Coord off = disp[idx];
    return geom_->node_id(geom_->wrap(owner.x + off.x, owner.y + off.y));
}

namespace {

int strong_radius_for(int m) {
    return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
}

std::vector<Coord> strong_offsets_for(const TorusGeometry& geom, int radius) {
    std::vector<Coord> out;
    for (int d = 1; d <= radius && d < static_cast<int>(geom.distance_histogram().size()); ++d)
        for (const Coord& c : geom.displacements_at(d)) out.push_back(c);
    return out;
}

void validate_params(const TorusGeometry& geom, int m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const int radius = strong_radius_for(m);
    if (geom.side() < 2 * radius + 1)
        throw std::invalid_argument("torus side must be at least 2*ceil(sqrt(m)) + 1");
}

}  // namespace

SmallWorldGraph::SmallWorldGraph(std::shared_ptr<const TorusGeometry> geom, int m, double gamma,
                                 Variant variant, std::uint64_t rng_seed,
                                 std::vector<NodeId> weak_targets, std::string rng_algorithm)
    : geom_(std::move(geom)),
      m_(m),
      gamma_(gamma),
      variant_(variant),
      rng_seed_(rng_seed),
      rng_algorithm_(std::move(rng_algorithm)),
      strong_radius_(strong_radius_for(m)),
      weak_(std::move(weak_targets)) {
    validate_params(*geom_, m_);
    const auto n = static_cast<std::size_t>(geom_->node_count());
    if (weak_.size() != n * static_cast<std::size_t>(m_))
        throw std::invalid_argument("weak tie list must hold n*m targets");
    for (std::size_t u = 0; u < n; ++u) {
        const auto* row = weak_.data() + u * static_cast<std::size_t>(m_);
        for (int j = 0; j < m_; ++j) {
            if (row[j] >= n) throw std::invalid_argument("weak tie target out of range");
            if (row[j] == static_cast<NodeId>(u))
                throw std::invalid_argument("weak tie may not be a self-loop");
        }
        if (variant_ == Variant::W) {
            for (int a = 0; a < m_; ++a)
                for (int b = a + 1; b < m_; ++b)
                    if (row[a] == row[b])
                        throw std::invalid_argument("variant W forbids repeated targets per node");
        }
    }
    strong_offsets_ = strong_offsets_for(*geom_, strong_radius_);
}

std::vector<NodeId> SmallWorldGraph::strong_neighbors(NodeId u) const {
    std::vector<NodeId> out;
    out.reserve(strong_offsets_.size());
    const Coord c = geom_->coord(u);
    for (const Coord& off : strong_offsets_)
        out.push_back(geom_->node_id(geom_->wrap(c.x + off.x, c.y + off.y)));
    return out;
}

std::vector<NodeId> SmallWorldGraph::influence_sources(NodeId u) const {
    std::vector<NodeId> out = strong_neighbors(u);
    const auto weak = weak_targets(u);
    out.insert(out.end(), weak.begin(), weak.end());
    return out;
}

namespace {

constexpr std::uint32_t kMagic = 0x52475753u;  // "SWGR" little-endian
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    static_assert(std::is_trivially_copyable_v<T>);
    if (pos + sizeof(T) > bytes.size()) throw std::runtime_error("truncated graph data");
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, bytes.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace

std::vector<std::uint8_t> SmallWorldGraph::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(32 + rng_algorithm_.size() + weak_.size() * sizeof(NodeId));
    put(out, kMagic);
    put(out, kFormatVersion);
    put(out, static_cast<std::uint32_t>(geom_->side()));
    put(out, static_cast<std::uint32_t>(m_));
    put(out, gamma_);
    put(out, static_cast<std::uint8_t>(variant_code(variant_)));
    put(out, rng_seed_);
    if (rng_algorithm_.size() > 255) throw std::invalid_argument("rng algorithm id too long");
    put(out, static_cast<std::uint8_t>(rng_algorithm_.size()));
    out.insert(out.end(), rng_algorithm_.begin(), rng_algorithm_.end());
    for (NodeId t : weak_) put(out, t);
    return out;
}

SmallWorldGraph SmallWorldGraph::deserialize(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    if (get<std::uint32_t>(bytes, pos) != kMagic)
        throw std::runtime_error("not a graph file (bad magic)");
    const auto version = get<std::uint32_t>(bytes, pos);
    if (version != kFormatVersion) throw std::runtime_error("unsupported graph format version");
    const auto side = get<std::uint32_t>(bytes, pos);
    const auto m = get<std::uint32_t>(bytes, pos);
    const double gamma = get<double>(bytes, pos);
    const Variant variant = variant_from_code(static_cast<char>(get<std::uint8_t>(bytes, pos)));
    const auto seed = get<std::uint64_t>(bytes, pos);
    const auto algo_len = get<std::uint8_t>(bytes, pos);
    if (pos + algo_len > bytes.size()) throw std::runtime_error("truncated graph data");
    std::string algo(reinterpret_cast<const char*>(bytes.data() + pos), algo_len);
    pos += algo_len;
    auto geom = std::make_shared<TorusGeometry>(static_cast<int>(side));
    const std::size_t count =
        static_cast<std::size_t>(geom->node_count()) * static_cast<std::size_t>(m);
    std::vector<NodeId> weak;
    weak.reserve(count);
    for (std::size_t i = 0; i < count; ++i) weak.push_back(get<NodeId>(bytes, pos));
    if (pos != bytes.size()) throw std::runtime_error("trailing bytes after graph data");
    return SmallWorldGraph(std::move(geom), static_cast<int>(m), gamma, variant, seed,
                           std::move(weak), std::move(algo));
}

void SmallWorldGraph::save(const std::filesystem::path& path) const {
    const auto bytes = serialize();
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

SmallWorldGraph SmallWorldGraph::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

void SmallWorldGraph::write_edge_list(std::ostream& os) const {
    const auto n = geom_->node_count();
    for (std::int64_t u = 0; u < n; ++u)
        for (NodeId t : weak_targets(static_cast<NodeId>(u))) os << u << ' ' << t << '\n';
}

bool SmallWorldGraph::operator==(const SmallWorldGraph& other) const {
    return geom_->side() == other.geom_->side() && m_ == other.m_ && gamma_ == other.gamma_ &&
           variant_ == other.variant_ && rng_seed_ == other.rng_seed_ &&
           rng_algorithm_ == other.rng_algorithm_ && weak_ == other.weak_;
}

SmallWorldGraph generate(std::shared_ptr<const TorusGeometry> geom, int m, double gamma,
                         Variant variant, std::uint64_t rng_seed) {
    validate_params(*geom, m);
    const auto n = static_cast<std::size_t>(geom->node_count());
    WeakTieSampler sampler(*geom, gamma);
    std::mt19937_64 gen(rng_seed);
    std::vector<NodeId> weak;
    weak.reserve(n * static_cast<std::size_t>(m));
    std::vector<NodeId> row(static_cast<std::size_t>(m));
    for (std::size_t u = 0; u < n; ++u) {
        const Coord c = geom->coord(static_cast<NodeId>(u));
        for (int j = 0; j < m; ++j) {
            for (;;) {
                const NodeId t = sampler.draw_target(gen, c);
                if (variant == Variant::W &&
                    std::find(row.begin(), row.begin() + j, t) != row.begin() + j)
                    continue;
                row[static_cast<std::size_t>(j)] = t;
                break;
            }
        }
        weak.insert(weak.end(), row.begin(), row.end());
    }
    return SmallWorldGraph(std::move(geom), m, gamma, variant, rng_seed, std::move(weak));
}

SmallWorldGraph generate(int L, int m, double gamma, Variant variant, std::uint64_t rng_seed) {
    return generate(std::make_shared<TorusGeometry>(L), m, gamma, variant, rng_seed);
}

}  // namespace swcc
