#include "swcc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "swcc/analytics.hpp"
#include "swcc/contagion.hpp"
#include "swcc/diagnostics.hpp"
#include "swcc/infection_dag.hpp"
#include "swcc/rng.hpp"

namespace swcc {

using nlohmann::json;

namespace {

std::vector<Variant> variants_from_json(const json& j) {
    std::vector<Variant> out;
    for (const auto& v : j) out.push_back(variant_from_code(v.get<std::string>().at(0)));
    return out;
}

}  // namespace

ExperimentSpec spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    static const std::vector<std::string> known = {
        "schema_version", "variants", "L",           "m",      "k",
        "gamma",          "replicas", "base_seed",   "max_rounds",
        "dag_checks",     "dag_epsilon", "census",   "census_delta",
        "threads"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key: " + key);

    ExperimentSpec spec;
    if (j.contains("schema_version")) spec.schema_version = j["schema_version"].get<int>();
    if (j.contains("variants")) spec.variants = variants_from_json(j["variants"]);
    if (j.contains("L")) spec.l_values = j["L"].get<std::vector<int>>();
    if (j.contains("m")) spec.m = j["m"].get<int>();
    if (j.contains("k")) spec.k = j["k"].get<int>();
    if (j.contains("gamma")) spec.gammas = j["gamma"].get<std::vector<double>>();
    if (j.contains("replicas")) spec.replicas = j["replicas"].get<int>();
    if (j.contains("base_seed")) spec.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("max_rounds")) spec.max_rounds = j["max_rounds"].get<int>();
    if (j.contains("dag_checks")) spec.dag_checks = j["dag_checks"].get<bool>();
    if (j.contains("dag_epsilon")) spec.dag_epsilon = j["dag_epsilon"].get<double>();
    if (j.contains("census")) spec.census = j["census"].get<bool>();
    if (j.contains("census_delta")) spec.census_delta = j["census_delta"].get<double>();
    if (j.contains("threads")) spec.threads = j["threads"].get<int>();
    return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["schema_version"] = spec.schema_version;
    std::vector<std::string> vs;
    for (Variant v : spec.variants) vs.emplace_back(1, variant_code(v));
    j["variants"] = vs;
    j["L"] = spec.l_values;
    j["m"] = spec.m;
    j["k"] = spec.k;
    j["gamma"] = spec.gammas;
    j["replicas"] = spec.replicas;
    j["base_seed"] = spec.base_seed;
    j["max_rounds"] = spec.max_rounds;
    j["dag_checks"] = spec.dag_checks;
    j["dag_epsilon"] = spec.dag_epsilon;
    j["census"] = spec.census;
    j["census_delta"] = spec.census_delta;
    j["threads"] = spec.threads;
    return j.dump(2);
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.schema_version != 1) throw std::invalid_argument("unsupported schema_version");
    if (spec.variants.empty()) throw std::invalid_argument("variants must be nonempty");
    if (spec.l_values.empty()) throw std::invalid_argument("L grid must be nonempty");
    if (spec.gammas.empty()) throw std::invalid_argument("gamma grid must be nonempty");
    if (spec.k < 1) throw std::invalid_argument("k must be >= 1");
    if (spec.m < spec.k) throw std::invalid_argument("model requires m >= k");
    const int radius = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.m))));
    for (int l : spec.l_values)
        if (l < 2 * radius + 1)
            throw std::invalid_argument("L must be >= 2*ceil(sqrt(m)) + 1");
    for (double g : spec.gammas)
        if (g < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (spec.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (spec.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace {

struct Task {
    Variant variant;
    int l;
    double gamma;
    int point;
    int replica;
};

ExperimentRecord run_task(const ExperimentSpec& spec, const Task& task) {
    ExperimentRecord rec;
    rec.variant = task.variant;
    rec.l = task.l;
    rec.m = spec.m;
    rec.k = spec.k;
    rec.gamma = task.gamma;
    rec.point = task.point;
    rec.replica = task.replica;
    rec.rng_seed = seed_mix(seed_mix(spec.base_seed, static_cast<std::uint64_t>(task.point)),
                            static_cast<std::uint64_t>(task.replica));
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto graph = generate(task.l, spec.m, task.gamma, task.variant, rec.rng_seed);
        const auto& geom = graph.geometry();
        std::vector<NodeId> seeds;
        for (const Coord& c : canonical_seed_cluster(geom, {0, 0}, spec.k))
            seeds.push_back(geom.node_id(c));
        const auto trace = run_contagion(graph, spec.k, seeds, spec.max_rounds);
        rec.covered = trace.covered;
        rec.rounds = trace.rounds_elapsed;
        rec.infected = trace.infected_count;
        rec.coverage_fraction =
            static_cast<double>(trace.infected_count) / static_cast<double>(geom.node_count());
        if (spec.dag_checks) {
            rec.dag_checked = true;
            const auto dag = build_dag(graph, trace, spec.k, spec.dag_epsilon);
            rec.dag_ok = check_path_time_consistency(dag, trace).ok;
        }
        if (spec.census) {
            rec.census_checked = true;
            const auto census = wide_bridge_census(graph, {0, 0}, spec.census_delta, spec.k);
            rec.census_z1 = census.z1;
            rec.census_z2 = census.z2;
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec) {
    validate_spec(spec);
    std::vector<Task> tasks;
    int point = 0;
    for (Variant variant : spec.variants)
        for (int l : spec.l_values)
            for (double gamma : spec.gammas) {
                for (int r = 0; r < spec.replicas; ++r)
                    tasks.push_back({variant, l, gamma, point, r});
                ++point;
            }

    std::vector<ExperimentRecord> records(tasks.size());
    const int threads = std::min<int>(spec.threads, static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = run_task(spec, tasks[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    records[i] = run_task(spec, tasks[i]);
                }
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

namespace {

constexpr const char* kRecordHeader =
    "variant,L,m,k,gamma,point,replica,rng_seed,covered,rounds,infected,coverage_fraction,"
    "wall_ms,dag_checked,dag_ok,census_checked,census_z1,census_z2,error";

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << kRecordHeader << '\n';
    for (const auto& r : records) {
        os << variant_code(r.variant) << ',' << r.l << ',' << r.m << ',' << r.k << ','
           << format_double(r.gamma) << ',' << r.point << ',' << r.replica << ',' << r.rng_seed
           << ',' << (r.covered ? "true" : "false") << ',';
        if (r.covered) os << r.rounds;
        os << ',' << r.infected << ',' << format_double(r.coverage_fraction) << ','
           << format_double(r.wall_ms) << ',' << (r.dag_checked ? "true" : "false") << ','
           << (r.dag_ok ? "true" : "false") << ',' << (r.census_checked ? "true" : "false") << ','
           << r.census_z1 << ',' << r.census_z2 << ',' << r.error << '\n';
    }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kRecordHeader)
        throw std::invalid_argument("unexpected records CSV header");
    std::vector<ExperimentRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 19) throw std::invalid_argument("malformed records CSV row");
        ExperimentRecord r;
        r.variant = variant_from_code(f[0].at(0));
        r.l = std::stoi(f[1]);
        r.m = std::stoi(f[2]);
        r.k = std::stoi(f[3]);
        r.gamma = std::stod(f[4]);
        r.point = std::stoi(f[5]);
        r.replica = std::stoi(f[6]);
        r.rng_seed = std::stoull(f[7]);
        r.covered = f[8] == "true";
        r.rounds = f[9].empty() ? 0 : std::stoi(f[9]);
        r.infected = std::stoll(f[10]);
        r.coverage_fraction = std::stod(f[11]);
        r.wall_ms = std::stod(f[12]);
        r.dag_checked = f[13] == "true";
        r.dag_ok = f[14] == "true";
        r.census_checked = f[15] == "true";
        r.census_z1 = std::stoll(f[16]);
        r.census_z2 = std::stoll(f[17]);
        r.error = f[18];
        out.push_back(r);
    }
    return out;
}

namespace {

struct PointKey {
    char variant;
    int l;
    double gamma;
    bool operator<(const PointKey& o) const {
        if (variant != o.variant) return variant < o.variant;
        if (l != o.l) return l < o.l;
        return gamma < o.gamma;
    }
};

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t h = xs.size() / 2;
    return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

std::map<PointKey, std::vector<const ExperimentRecord*>> group_by_point(
    const std::vector<ExperimentRecord>& records) {
    std::map<PointKey, std::vector<const ExperimentRecord*>> groups;
    for (const auto& r : records)
        groups[{variant_code(r.variant), r.l, r.gamma}].push_back(&r);
    return groups;
}

}  // namespace

std::optional<double> median_rounds(const std::vector<ExperimentRecord>& records, Variant variant,
                                    double gamma, int l) {
    std::vector<double> rounds;
    for (const auto& r : records)
        if (r.variant == variant && r.l == l && r.gamma == gamma && r.covered &&
            r.error.empty())
            rounds.push_back(static_cast<double>(r.rounds));
    if (rounds.empty()) return std::nullopt;
    return median(std::move(rounds));
}

void write_point_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << "variant,L,m,k,gamma,replicas,coverage_rate,median_rounds,mean_rounds\n";
    for (const auto& [key, group] : group_by_point(records)) {
        std::vector<double> rounds;
        int covered = 0;
        for (const auto* r : group)
            if (r->covered && r->error.empty()) {
                ++covered;
                rounds.push_back(static_cast<double>(r->rounds));
            }
        os << key.variant << ',' << key.l << ',' << group.front()->m << ',' << group.front()->k
           << ',' << format_double(key.gamma) << ',' << group.size() << ','
           << format_double(static_cast<double>(covered) / static_cast<double>(group.size()))
           << ',';
        if (!rounds.empty()) {
            double mean = 0.0;
            for (double x : rounds) mean += x;
            mean /= static_cast<double>(rounds.size());
            os << format_double(median(rounds)) << ',' << format_double(mean);
        } else {
            os << ',';
        }
        os << '\n';
    }
}

void write_fit_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << "variant,m,k,gamma,points,exponent,stderr,r_squared\n";
    std::map<std::pair<char, double>, std::vector<std::pair<double, double>>> samples;
    std::map<std::pair<char, double>, std::pair<int, int>> mk;
    for (const auto& [key, group] : group_by_point(records)) {
        std::vector<double> rounds;
        for (const auto* r : group)
            if (r->covered && r->error.empty()) rounds.push_back(static_cast<double>(r->rounds));
        if (rounds.empty()) continue;
        const double med = median(rounds);
        if (med <= 0.0) continue;
        const double n = static_cast<double>(key.l) * key.l;
        samples[{key.variant, key.gamma}].emplace_back(n, med);
        mk[{key.variant, key.gamma}] = {group.front()->m, group.front()->k};
    }
    for (const auto& [key, pts] : samples) {
        if (pts.size() < 3) continue;
        const auto fit = fit_scaling_exponent(pts);
        os << key.first << ',' << mk[key].first << ',' << mk[key].second << ','
           << format_double(key.second) << ',' << pts.size() << ','
           << format_double(fit.exponent) << ',' << format_double(fit.stderr_value) << ','
           << format_double(fit.r_squared) << '\n';
    }
}

}  // namespace swcc
