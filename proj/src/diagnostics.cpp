#include "swcc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "swcc/infection_dag.hpp"
#include "swcc/rng.hpp"

namespace swcc {

WideBridgeCensus wide_bridge_census(const SmallWorldGraph& graph, Coord center, double delta,
                                    int k) {
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const auto& geom = graph.geometry();
    const auto n = geom.node_count();

    WideBridgeCensus census;
    census.radius = ceil_power(n, delta);
    const std::int64_t r = census.radius;
    for (std::int64_t v = 0; v < n; ++v) {
        const auto id = static_cast<NodeId>(v);
        const int dist = geom.distance(geom.coord(id), center);
        const bool in_annulus = dist > 2 * r;
        const bool in_near_disk = dist <= 2 * r;
        if (in_annulus) ++census.annulus_size;
        if (in_near_disk) ++census.near_disk_size;
        int into_disk = 0;
        for (NodeId t : graph.weak_targets(id))
            if (geom.distance(geom.coord(t), center) <= r) ++into_disk;
        if (into_disk >= k) {
            if (in_annulus) ++census.z1;
            if (in_near_disk) ++census.z2;
        }
    }
    return census;
}

BlockCensusReport long_tie_block_census(const SmallWorldGraph& graph, double delta, int k,
                                        const ContagionTrace* trace) {
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const auto& geom = graph.geometry();
    const auto n = geom.node_count();

    BlockCensusReport report;
    report.min_long_length = strict_above_power(n, 0.5 - delta);
    report.block_side = static_cast<int>(std::min<std::int64_t>(ceil_power(n, 0.5 - delta),
                                                                geom.side()));
    for (std::int64_t v = 0; v < n; ++v) {
        const auto id = static_cast<NodeId>(v);
        int long_owned = 0;
        for (NodeId t : graph.weak_targets(id))
            if (geom.distance(id, t) >= report.min_long_length) ++long_owned;
        if (long_owned >= k) report.violating_nodes.push_back(id);
    }
    report.any = !report.violating_nodes.empty();

    if (trace && !report.any) {
        report.trace_checked = true;
        if (trace->infected_round.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("trace does not match graph");
        const int b = report.block_side;
        const int rounds = trace->rounds_elapsed;
        std::set<BlockId> touched;
        for (NodeId s : trace->seeds) touched.insert(block_index(geom, geom.coord(s), b));
        std::vector<std::vector<BlockId>> new_blocks(static_cast<std::size_t>(rounds) + 1);
        for (std::int64_t v = 0; v < n; ++v) {
            const auto rd = trace->infected_round[static_cast<std::size_t>(v)];
            if (rd < 1) continue;
            new_blocks[static_cast<std::size_t>(rd)].push_back(
                block_index(geom, geom.coord(static_cast<NodeId>(v)), b));
        }
        for (int rd = 1; rd <= rounds && report.block_spread_ok; ++rd) {
            auto& blocks = new_blocks[static_cast<std::size_t>(rd)];
            std::sort(blocks.begin(), blocks.end());
            blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
            for (const BlockId& nb : blocks) {
                if (touched.count(nb)) continue;
                bool ok = false;
                for (const BlockId& adj : adjacent_blocks(geom, nb, b))
                    if (touched.count(adj)) {
                        ok = true;
                        break;
                    }
                if (!ok) {
                    report.block_spread_ok = false;
                    report.first_bad_round = rd;
                    report.first_bad_block = nb;
                    break;
                }
            }
            for (const BlockId& nb : blocks) touched.insert(nb);
        }
    }
    return report;
}

namespace {

// Incident long ties per node and tie ids for exact dedup: tie id =
// owner * m + slot.
struct LongTieIndex {
    std::int64_t threshold;
    std::vector<std::vector<std::int64_t>> incident;  // per node, sorted tie ids
    int max_incident = 0;

    LongTieIndex(const SmallWorldGraph& g, std::int64_t thr) : threshold(thr) {
        const auto& geom = g.geometry();
        const auto n = static_cast<std::size_t>(g.node_count());
        incident.assign(n, {});
        for (std::size_t u = 0; u < n; ++u) {
            const auto weak = g.weak_targets(static_cast<NodeId>(u));
            for (int slot = 0; slot < static_cast<int>(weak.size()); ++slot) {
                const NodeId t = weak[static_cast<std::size_t>(slot)];
                if (geom.distance(static_cast<NodeId>(u), t) < threshold) continue;
                const std::int64_t tie = static_cast<std::int64_t>(u) * g.m() + slot;
                incident[u].push_back(tie);
                if (t != static_cast<NodeId>(u)) incident[t].push_back(tie);
            }
        }
        for (auto& xs : incident) {
            std::sort(xs.begin(), xs.end());
            max_incident = std::max(max_incident, static_cast<int>(xs.size()));
        }
    }
};

// Undirected strong+weak neighbors, deduplicated, for the witness search.
std::vector<NodeId> undirected_neighbors(const SmallWorldGraph& g,
                                         const std::vector<std::vector<NodeId>>& weak_in,
                                         NodeId v) {
    std::vector<NodeId> out = g.strong_neighbors(v);
    const auto weak = g.weak_targets(v);
    out.insert(out.end(), weak.begin(), weak.end());
    out.insert(out.end(), weak_in[v].begin(), weak_in[v].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

class WitnessSearch {
public:
    WitnessSearch(const SmallWorldGraph& g, const LongTieIndex& ties, int size_bound,
                  std::int64_t target)
        : graph_(g), ties_(ties), size_bound_(size_bound), target_(target) {
        const auto n = static_cast<std::size_t>(g.node_count());
        weak_in_.assign(n, {});
        for (std::size_t u = 0; u < n; ++u)
            for (NodeId t : g.weak_targets(static_cast<NodeId>(u)))
                weak_in_[t].push_back(static_cast<NodeId>(u));
        in_chosen_.assign(n, 0);
        banned_.assign(n, 0);
    }

    std::optional<HeavySubsetWitness> run() {
        std::vector<NodeId> seeds;
        for (std::size_t v = 0; v < ties_.incident.size(); ++v)
            if (!ties_.incident[v].empty()) seeds.push_back(static_cast<NodeId>(v));
        for (NodeId s : seeds) {
            chosen_.clear();
            tie_ids_.clear();
            add(s);
            std::vector<NodeId> frontier = undirected_neighbors(graph_, weak_in_, s);
            if (grow(frontier)) {
                HeavySubsetWitness w;
                w.nodes = chosen_;
                std::sort(w.nodes.begin(), w.nodes.end());
                w.long_ties = static_cast<std::int64_t>(tie_ids_.size());
                remove_last_all();
                return w;
            }
            remove_last_all();
        }
        return std::nullopt;
    }

private:
    void add(NodeId v) {
        chosen_.push_back(v);
        in_chosen_[v] = 1;
        added_ties_.push_back({});
        for (std::int64_t tie : ties_.incident[v])
            if (!std::binary_search(tie_ids_.begin(), tie_ids_.end(), tie)) {
                added_ties_.back().push_back(tie);
            }
        for (std::int64_t tie : added_ties_.back())
            tie_ids_.insert(std::lower_bound(tie_ids_.begin(), tie_ids_.end(), tie), tie);
    }

    void remove_last() {
        const NodeId v = chosen_.back();
        chosen_.pop_back();
        in_chosen_[v] = 0;
        for (std::int64_t tie : added_ties_.back())
            tie_ids_.erase(std::find(tie_ids_.begin(), tie_ids_.end(), tie));
        added_ties_.pop_back();
    }

    void remove_last_all() {
        while (!chosen_.empty()) remove_last();
    }

    // Include/exclude growth over the connected supersets of the seed; each
    // subset of size <= size_bound is reached exactly once.
    bool grow(std::vector<NodeId> frontier) {
        if (static_cast<std::int64_t>(tie_ids_.size()) >= target_) return true;
        if (static_cast<int>(chosen_.size()) >= size_bound_) return false;
        const std::int64_t room = size_bound_ - static_cast<std::int64_t>(chosen_.size());
        if (static_cast<std::int64_t>(tie_ids_.size()) + room * ties_.max_incident < target_)
            return false;
        std::vector<NodeId> banned_here;
        bool found = false;
        while (!frontier.empty() && !found) {
            const NodeId c = frontier.back();
            frontier.pop_back();
            if (in_chosen_[c] || banned_[c]) continue;
            add(c);
            std::vector<NodeId> next = frontier;
            for (NodeId nb : undirected_neighbors(graph_, weak_in_, c)) {
                if (in_chosen_[nb] || banned_[nb]) continue;
                if (std::find(next.begin(), next.end(), nb) == next.end()) next.push_back(nb);
            }
            found = grow(std::move(next));
            if (!found) {
                remove_last();
                banned_[c] = 1;  // exclude from the remaining branches
                banned_here.push_back(c);
            }
        }
        if (!found)
            for (NodeId c : banned_here) banned_[c] = 0;
        return found;
    }

    const SmallWorldGraph& graph_;
    const LongTieIndex& ties_;
    int size_bound_;
    std::int64_t target_;
    std::vector<std::vector<NodeId>> weak_in_;
    std::vector<NodeId> chosen_;
    std::vector<std::int64_t> tie_ids_;               // sorted distinct tie ids
    std::vector<std::vector<std::int64_t>> added_ties_;
    std::vector<std::uint8_t> in_chosen_;
    std::vector<std::uint8_t> banned_;
};

}  // namespace

std::optional<HeavySubsetWitness> heavy_connected_subset_search(const SmallWorldGraph& graph,
                                                                int k, double epsilon) {
    if (k != 2 && k != 3)
        throw std::invalid_argument("heavy subset search supports k in {2, 3} only");
    const std::int64_t threshold = long_tie_threshold(graph.node_count(), epsilon);
    const LongTieIndex ties(graph, threshold);
    const int size_bound = k * k - k + 1;
    const std::int64_t target = static_cast<std::int64_t>(k) * (k + 1) / 2;
    WitnessSearch search(graph, ties, size_bound, target);
    return search.run();
}

void wilson_interval(int successes, int trials, double& lo, double& hi) {
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("successes must lie in [0, trials]");
    const double z = 1.959963984540054;
    const double n = trials;
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    lo = std::max(0.0, (center - spread) / denom);
    hi = std::min(1.0, (center + spread) / denom);
}

TrialEstimate recursive_spreading_trial(int L, int m, double gamma, Variant variant, int k,
                                        double delta, int trials, std::uint64_t rng_seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    auto geom = std::make_shared<TorusGeometry>(L);

    // floor(L^(1-delta)) with near-integer snapping, but never below k.
    const int side =
        static_cast<int>(std::max<std::int64_t>(k, strict_above_power(L, 1.0 - delta) - 1));
    TrialEstimate est;
    est.subsquare_side = side;
    const Square a{{0, 0}, side};
    const Square b{{L / 2, L / 2}, side};
    if (a.overlaps(*geom, b))
        throw std::invalid_argument("subsquares overlap: grid too small for this delta");

    std::vector<NodeId> seeds;
    for (const Coord& c : a.cells(*geom)) seeds.push_back(geom->node_id(c));

    est.trials = trials;
    for (int i = 0; i < trials; ++i) {
        const auto g = generate(geom, m, gamma, variant, seed_mix(rng_seed, static_cast<std::uint64_t>(i)));
        const auto trace = run_contagion(g, k, seeds, k);
        if (detect_new_seed_cluster(*geom, trace, b, k, k)) ++est.successes;
    }
    est.success_rate = static_cast<double>(est.successes) / trials;
    wilson_interval(est.successes, est.trials, est.ci_lo, est.ci_hi);
    return est;
}

}  // namespace swcc
