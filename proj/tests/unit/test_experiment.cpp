#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "swcc/experiment.hpp"
#include "swcc/rng.hpp"

using namespace swcc;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.variants = {Variant::W, Variant::I};
    spec.l_values = {8, 12};
    spec.m = 2;
    spec.k = 2;
    spec.gammas = {2.0, 3.0};
    spec.replicas = 2;
    spec.base_seed = 99;
    return spec;
}

bool same_ignoring_wall_time(const ExperimentRecord& a, const ExperimentRecord& b) {
    return a.variant == b.variant && a.l == b.l && a.m == b.m && a.k == b.k &&
           a.gamma == b.gamma && a.point == b.point && a.replica == b.replica &&
           a.rng_seed == b.rng_seed && a.covered == b.covered && a.rounds == b.rounds &&
           a.infected == b.infected && a.coverage_fraction == b.coverage_fraction &&
           a.dag_checked == b.dag_checked && a.dag_ok == b.dag_ok &&
           a.census_checked == b.census_checked && a.census_z1 == b.census_z1 &&
           a.census_z2 == b.census_z2 && a.error == b.error;
}

}  // namespace

TEST_CASE("spec json round-trips field for field") {
    auto spec = small_spec();
    spec.dag_checks = true;
    spec.dag_epsilon = 0.12;
    spec.census = true;
    spec.census_delta = 0.2;
    spec.threads = 3;
    spec.max_rounds = 100;

    const auto text = spec_to_json(spec);
    const auto back = spec_from_json(text);
    CHECK(back.variants == spec.variants);
    CHECK(back.l_values == spec.l_values);
    CHECK(back.m == spec.m);
    CHECK(back.k == spec.k);
    CHECK(back.gammas == spec.gammas);
    CHECK(back.replicas == spec.replicas);
    CHECK(back.base_seed == spec.base_seed);
    CHECK(back.max_rounds == spec.max_rounds);
    CHECK(back.dag_checks == spec.dag_checks);
    CHECK(back.dag_epsilon == spec.dag_epsilon);
    CHECK(back.census == spec.census);
    CHECK(back.census_delta == spec.census_delta);
    CHECK(back.threads == spec.threads);

    // partial documents keep defaults; unknown keys are rejected
    const auto sparse = spec_from_json(R"({"L": [16], "gamma": [2.5]})");
    CHECK(sparse.l_values == std::vector<int>{16});
    CHECK(sparse.m == 2);
    CHECK(sparse.replicas == 1);
    CHECK_THROWS(spec_from_json(R"({"LL": [16]})"));
    CHECK_THROWS(spec_from_json(R"({"variants": ["Q"]})"));
    CHECK_THROWS(spec_from_json("not json"));
}

TEST_CASE("spec validation rejects inconsistent parameters") {
    CHECK_NOTHROW(validate_spec(small_spec()));
    auto bad = small_spec();
    bad.m = 1;  // m < k
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.l_values = {4};  // below 2*ceil(sqrt(m)) + 1
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.gammas = {-1.0};
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.gammas.clear();
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.replicas = 0;
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.threads = 0;
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
    bad = small_spec();
    bad.schema_version = 2;
    CHECK_THROWS_AS(validate_spec(bad), std::invalid_argument);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
    auto spec = small_spec();
    spec.dag_checks = true;
    spec.census = true;
    const auto once = run_sweep(spec);
    const auto twice = run_sweep(spec);
    auto threaded = spec;
    threaded.threads = 4;
    const auto parallel = run_sweep(threaded);

    const std::size_t expected = 2 * 2 * 2 * 2;  // variants x L x gamma x replicas
    REQUIRE(once.size() == expected);
    REQUIRE(twice.size() == expected);
    REQUIRE(parallel.size() == expected);
    for (std::size_t i = 0; i < expected; ++i) {
        CHECK(same_ignoring_wall_time(once[i], twice[i]));
        CHECK(same_ignoring_wall_time(once[i], parallel[i]));
        CHECK(once[i].error.empty());
        CHECK(once[i].dag_checked);
        CHECK(once[i].dag_ok);
        CHECK(once[i].census_checked);
    }

    // seeds follow the pinned two-level derivation
    for (const auto& rec : once)
        CHECK(rec.rng_seed == seed_mix(seed_mix(99, rec.point), rec.replica));

    // point enumeration is variant-major, then L, then gamma
    CHECK(once[0].variant == Variant::W);
    CHECK(once[0].l == 8);
    CHECK(once[0].gamma == 2.0);
    const auto& last = once.back();
    CHECK(last.variant == Variant::I);
    CHECK(last.l == 12);
    CHECK(last.gamma == 3.0);
    for (std::size_t i = 1; i < once.size(); ++i) {
        const auto key = [](const ExperimentRecord& r) {
            return std::make_tuple(r.variant == Variant::I, r.l, r.gamma, r.replica);
        };
        CHECK(key(once[i - 1]) < key(once[i]));
        CHECK(once[i].point >= once[i - 1].point);
    }
}

TEST_CASE("record csv round-trips exactly") {
    auto spec = small_spec();
    spec.census = true;
    const auto records = run_sweep(spec);
    std::ostringstream os;
    write_records_csv(os, records);
    std::istringstream is(os.str());
    const auto back = read_records_csv(is);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(same_ignoring_wall_time(records[i], back[i]));
        CHECK(records[i].wall_ms == back[i].wall_ms);
    }

    std::istringstream bad_header("not,the,header\n");
    CHECK_THROWS(read_records_csv(bad_header));
    std::istringstream bad_fields(os.str().substr(0, os.str().find('\n') + 1) + "W,8,2\n");
    CHECK_THROWS(read_records_csv(bad_fields));
}

TEST_CASE("summaries aggregate by point") {
    // hand-built records: one point, three replicas, one uncovered
    std::vector<ExperimentRecord> records(3);
    for (int i = 0; i < 3; ++i) {
        auto& r = records[i];
        r.variant = Variant::W;
        r.l = 16;
        r.m = 2;
        r.k = 2;
        r.gamma = 2.5;
        r.point = 0;
        r.replica = i;
        r.covered = i != 2;
        r.rounds = 10 + 4 * i;  // 10, 14, ignored
        r.infected = r.covered ? 256 : 100;
        r.coverage_fraction = r.infected / 256.0;
    }
    const auto med = median_rounds(records, Variant::W, 2.5, 16);
    REQUIRE(med.has_value());
    CHECK(*med == 12.0);  // median of {10, 14}
    CHECK_FALSE(median_rounds(records, Variant::I, 2.5, 16).has_value());

    std::ostringstream os;
    write_point_summary_csv(os, records);
    const std::string out = os.str();
    CHECK(out.find("variant,L,m,k,gamma,replicas,coverage_rate,median_rounds,mean_rounds") !=
          std::string::npos);
    // coverage 2/3, median 12, mean 12
    CHECK(out.find("W,16,2,2") != std::string::npos);

    // fit summary needs 3 covered L values per (variant, gamma)
    std::ostringstream fit;
    write_fit_summary_csv(fit, records);
    std::istringstream fit_lines(fit.str());
    std::string header, rest;
    std::getline(fit_lines, header);
    CHECK(header == "variant,m,k,gamma,points,exponent,stderr,r_squared");
    CHECK_FALSE(std::getline(fit_lines, rest));  // only one L: no fit row
}

TEST_CASE("fit summary recovers a scaling law from synthetic medians") {
    std::vector<ExperimentRecord> records;
    for (int li : {16, 32, 64, 128}) {
        for (int rep = 0; rep < 2; ++rep) {
            ExperimentRecord r;
            r.variant = Variant::W;
            r.l = li;
            r.m = 2;
            r.k = 2;
            r.gamma = 2.5;
            r.point = li;
            r.replica = rep;
            r.covered = true;
            const double n = static_cast<double>(li) * li;
            r.rounds = static_cast<int>(std::lround(2.0 * std::pow(n, 0.25)));
            r.infected = static_cast<std::int64_t>(n);
            r.coverage_fraction = 1.0;
            records.push_back(r);
        }
    }
    std::ostringstream os;
    write_fit_summary_csv(os, records);
    std::istringstream lines(os.str());
    std::string header, row;
    std::getline(lines, header);
    REQUIRE(std::getline(lines, row));
    // row: variant,m,k,gamma,points,exponent,stderr,r_squared
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream cells(row);
    std::string variant;
    int m, k, points;
    double gamma, exponent, se, r2;
    cells >> variant >> m >> k >> gamma >> points >> exponent >> se >> r2;
    CHECK(variant == "W");
    CHECK(points == 4);
    CHECK(exponent == doctest::Approx(0.25).epsilon(0.02));
    CHECK(r2 > 0.99);
}
