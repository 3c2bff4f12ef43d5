#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "swcc/contagion.hpp"
#include "swcc/graph.hpp"
#include "swcc/rng.hpp"

using namespace swcc;

namespace {

std::vector<NodeId> cluster_at(const TorusGeometry& geom, Coord anchor, int k) {
    std::vector<NodeId> seeds;
    for (const Coord& c : canonical_seed_cluster(geom, anchor, k)) seeds.push_back(geom.node_id(c));
    return seeds;
}

}  // namespace

TEST_CASE("engine agrees with full-rescan dynamics on random instances") {
    int instance = 0;
    for (int L : {6, 8, 10})
        for (int m : {2, 3})
            for (int k : {1, 2, 3})
                for (double gamma : {0.0, 2.0, 3.5})
                    for (Variant variant : {Variant::W, Variant::I}) {
                        const std::uint64_t seed = seed_mix(777, instance++);
                        const auto g = generate(L, m, gamma, variant, seed);
                        const auto seeds = cluster_at(g.geometry(), {1, 1}, std::max(k, 2));
                        const auto trace = run_contagion(g, k, seeds);
                        const auto expect = oracle::rescan_contagion(g, k, seeds, -1);
                        REQUIRE(trace.infected_round.size() == expect.size());
                        for (NodeId v = 0; v < g.node_count(); ++v)
                            CHECK(trace.infected_round[v] == expect[v]);
                        CHECK(oracle::rounds_are_tight(g, k, trace.infected_round));
                        // summary fields recomputed from the rounds
                        std::int64_t infected = 0;
                        int last = 0;
                        for (NodeId v = 0; v < g.node_count(); ++v)
                            if (expect[v] >= 0) {
                                ++infected;
                                last = std::max(last, static_cast<int>(expect[v]));
                            }
                        CHECK(trace.infected_count == infected);
                        CHECK(trace.rounds_elapsed == last);
                        CHECK(trace.covered == (infected == g.node_count()));
                        std::int64_t from_frontiers = static_cast<std::int64_t>(trace.seeds.size());
                        for (std::int64_t f : trace.frontier_sizes) from_frontiers += f;
                        CHECK(from_frontiers == infected);
                        CHECK(static_cast<int>(trace.frontier_sizes.size()) ==
                              trace.rounds_elapsed);
                    }
}

TEST_CASE("threshold one is breadth-first search on reversed influence edges") {
    for (int i = 0; i < 12; ++i) {
        const int L = 6 + (i % 4);
        const auto g = generate(L, 2, 1.5, i % 2 ? Variant::W : Variant::I, seed_mix(31, i));
        const std::vector<NodeId> seeds{static_cast<NodeId>(i % (L * L))};
        const auto trace = run_contagion(g, 1, seeds);
        const auto dist = oracle::reverse_bfs(g, seeds, -1);
        for (NodeId v = 0; v < g.node_count(); ++v) CHECK(trace.infected_round[v] == dist[v]);
    }
}

TEST_CASE("seed list is canonicalized and validated") {
    const auto g = generate(8, 2, 2.0, Variant::W, 3);
    const std::vector<NodeId> messy{9, 2, 9, 2, 5};
    const std::vector<NodeId> clean{2, 5, 9};
    const auto a = run_contagion(g, 2, messy);
    const auto b = run_contagion(g, 2, clean);
    CHECK(a.seeds == clean);
    CHECK(a.infected_round == b.infected_round);

    CHECK_THROWS_AS(run_contagion(g, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_contagion(g, 0, clean), std::invalid_argument);
    CHECK_THROWS_AS(run_contagion(g, 2, {static_cast<NodeId>(64)}), std::invalid_argument);
}

TEST_CASE("max_rounds truncates the cascade exactly") {
    const auto g = generate(12, 2, 2.0, Variant::W, 5);
    const auto seeds = cluster_at(g.geometry(), {0, 0}, 2);
    const auto full = run_contagion(g, 2, seeds);
    REQUIRE(full.rounds_elapsed > 3);
    const auto cut = run_contagion(g, 2, seeds, 3);
    CHECK(cut.rounds_elapsed <= 3);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (full.infected_round[v] >= 0 && full.infected_round[v] <= 3)
            CHECK(cut.infected_round[v] == full.infected_round[v]);
        else
            CHECK(cut.infected_round[v] == -1);
    }
    CHECK_FALSE(cut.covered);
    CHECK(rounds_to_full(cut) == std::nullopt);
    if (full.covered) CHECK(rounds_to_full(full) == full.rounds_elapsed);
}

TEST_CASE("more seeds never infect less; higher threshold never infects more") {
    const auto g = generate(10, 3, 2.5, Variant::I, 17);
    const auto base_seeds = cluster_at(g.geometry(), {2, 3}, 3);
    auto more_seeds = base_seeds;
    more_seeds.push_back(g.geometry().node_id({7, 7}));

    const auto base = run_contagion(g, 2, base_seeds);
    const auto more = run_contagion(g, 2, more_seeds);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (base.infected_round[v] >= 0) {
            CHECK(more.infected_round[v] >= 0);
            CHECK(more.infected_round[v] <= base.infected_round[v]);
        }

    const auto stricter = run_contagion(g, 3, base_seeds);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (stricter.infected_round[v] >= 0) {
            CHECK(base.infected_round[v] >= 0);
            CHECK(base.infected_round[v] <= stricter.infected_round[v]);
        }
}

TEST_CASE("a planted relay chain infects on schedule") {
    // L = 5, m = 1, every node ties to node 0: influence flows from 0 outward
    // along every reversed tie at once.
    auto geom = std::make_shared<TorusGeometry>(5);
    std::vector<NodeId> ties(25, 0);
    ties[0] = 1;  // no self-loops
    SmallWorldGraph g(geom, 1, 2.0, Variant::W, 1, ties);
    const auto trace = run_contagion(g, 1, {0});
    // everyone owns a tie to node 0, so influence flows from 0 to everyone
    for (NodeId v = 1; v < 25; ++v) CHECK(trace.infected_round[v] == 1);
    CHECK(trace.rounds_elapsed == 1);
    CHECK(trace.covered);

    // at k = 2 the same tie plus one strong neighbor is needed
    const auto t2 = run_contagion(g, 2, {0});
    for (NodeId v = 1; v < 25; ++v) {
        if (g.strong_tied(0, v))
            CHECK(t2.infected_round[v] == 1);  // strong + weak, multiplicity 2
    }
}

TEST_CASE("new-cluster detection matches exhaustive subset enumeration") {
    const auto g = generate(10, 2, 2.0, Variant::W, 21);
    const auto& geom = g.geometry();
    const Square region{{5, 5}, 4};
    const auto seeds = cluster_at(geom, {0, 0}, 2);
    const auto trace = run_contagion(g, 2, seeds);

    for (int k : {2, 3, 4}) {
        for (int deadline = 0; deadline <= trace.rounds_elapsed + 1; ++deadline) {
            const auto got = detect_new_seed_cluster(geom, trace, region, k, deadline);
            // oracle: scan all connected k-subsets, keep the earliest round
            std::optional<SeedClusterHit> best;
            for (const auto& subset : oracle::connected_k_subsets(geom, region, k)) {
                int worst = -1;
                bool all = true;
                for (NodeId v : subset) {
                    if (trace.infected_round[v] < 0) all = false;
                    worst = std::max(worst, static_cast<int>(trace.infected_round[v]));
                }
                if (!all || worst > deadline) continue;
                if (!best || worst < best->round) best = SeedClusterHit{subset, worst};
            }
            CHECK(got.has_value() == best.has_value());
            if (got && best) {
                CHECK(got->round == best->round);
                CHECK(got->cells.size() == static_cast<std::size_t>(k));
                CHECK(std::is_sorted(got->cells.begin(), got->cells.end()));
                int worst = -1;
                for (NodeId v : got->cells) {
                    CHECK(region.contains(geom, geom.coord(v)));
                    CHECK(trace.infected_round[v] >= 0);
                    worst = std::max(worst, static_cast<int>(trace.infected_round[v]));
                }
                CHECK(worst == got->round);
            }
        }
    }
}

TEST_CASE("large-k detection scans straight runs") {
    const auto g = generate(12, 2, 2.0, Variant::W, 8);
    const auto& geom = g.geometry();
    const auto seeds = cluster_at(geom, {0, 0}, 2);
    const auto trace = run_contagion(g, 2, seeds);
    const Square region{{4, 4}, 6};
    const int k = 5;
    const auto got = detect_new_seed_cluster(geom, trace, region, k, trace.rounds_elapsed);

    std::optional<int> best;
    auto consider = [&](std::vector<NodeId> cells) {
        int worst = -1;
        for (NodeId v : cells) {
            if (!region.contains(geom, geom.coord(v)) || trace.infected_round[v] < 0) return;
            worst = std::max(worst, static_cast<int>(trace.infected_round[v]));
        }
        if (!best || worst < *best) best = worst;
    };
    for (int x = 4; x < 10; ++x)
        for (int y = 4; y < 10; ++y) {
            std::vector<NodeId> h, v;
            for (int i = 0; i < k; ++i) {
                h.push_back(geom.node_id(geom.wrap(x + i, y)));
                v.push_back(geom.node_id(geom.wrap(x, y + i)));
            }
            consider(h);
            consider(v);
        }
    CHECK(got.has_value() == best.has_value());
    if (got && best) CHECK(got->round == *best);
}

TEST_CASE("trace output formats") {
    const auto g = generate(6, 2, 2.0, Variant::W, 2);
    const auto trace = run_contagion(g, 2, cluster_at(g.geometry(), {0, 0}, 2), 2);
    std::ostringstream os;
    write_trace_csv(os, g.geometry(), trace);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "node_x,node_y,infected_round");
    int lines = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 36);

    const auto parsed = nlohmann::json::parse(trace_summary_json(trace));
    CHECK(parsed["covered"].get<bool>() == trace.covered);
    CHECK(parsed["rounds"].get<int>() == trace.rounds_elapsed);
    CHECK(parsed["frontier_sizes"].size() == trace.frontier_sizes.size());
}
