#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swcc/graph.hpp"

namespace swcc {

struct ExperimentSpec {
    int schema_version = 1;
    std::vector<Variant> variants{Variant::W};
    std::vector<int> l_values{32};
    int m = 2;
    int k = 2;
    std::vector<double> gammas{2.5};
    int replicas = 1;
    std::uint64_t base_seed = 1;
    int max_rounds = -1;  // -1: per-run default 4*L
    bool dag_checks = false;
    double dag_epsilon = 0.1;
    bool census = false;
    double census_delta = 0.15;
    int threads = 1;
};

// JSON object mirroring the struct field-for-field ("variants" uses "W"/"I",
// "L" and "gamma" are arrays). Unknown keys are rejected.
ExperimentSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec);

// Model preconditions: m >= k >= 1, every L >= 2*ceil(sqrt(m)) + 1,
// schema_version == 1, nonempty grids, replicas/threads >= 1.
void validate_spec(const ExperimentSpec& spec);

struct ExperimentRecord {
    Variant variant = Variant::W;
    int l = 0;
    int m = 0;
    int k = 0;
    double gamma = 0.0;
    int point = 0;    // index in the (variant, L, gamma) enumeration
    int replica = 0;
    std::uint64_t rng_seed = 0;
    bool covered = false;
    int rounds = 0;               // meaningful iff covered
    std::int64_t infected = 0;
    double coverage_fraction = 0.0;
    double wall_ms = 0.0;         // excluded from reproducibility comparisons
    bool dag_checked = false;
    bool dag_ok = false;
    bool census_checked = false;
    std::int64_t census_z1 = 0;
    std::int64_t census_z2 = 0;
    std::string error;            // nonempty when the replica failed to run
};

// One record per (point, replica). Each replica seeds the canonical k-cell
// cluster at the origin of a fresh graph drawn with
// seed_mix(seed_mix(base_seed, point), replica). Deterministic for a fixed
// spec regardless of thread count; failures are recorded, not thrown.
std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec);

// Long-format CSV, one row per record; `rounds` is left empty when the
// cascade did not cover the graph. Round-trips through read_records_csv.
void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& is);

// Per-point aggregation: coverage rate, median/mean rounds over covered
// replicas.
void write_point_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);

// Per (variant, gamma) scaling fit of log median-rounds against log n over
// the L ladder; points with fewer than 3 covered L values are skipped.
void write_fit_summary_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);

// Medians of covered rounds keyed by (variant, gamma, L), exposed for reuse.
std::optional<double> median_rounds(const std::vector<ExperimentRecord>& records,
                                    Variant variant, double gamma, int l);

}  // namespace swcc
