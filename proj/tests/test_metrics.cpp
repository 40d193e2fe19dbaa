#include <doctest.h>

#include <cmath>
#include <limits>

#include "evoforge/errors.hpp"
#include "evoforge/metrics.hpp"
#include "evoforge/rng.hpp"

using namespace evoforge;

namespace {

// Independent O(N^2) oracle: full distance matrix, then a row minimum.
DiversityStats brute_force_diversity(const std::vector<std::vector<double>>& embeddings) {
    const std::size_t n = embeddings.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double sum = 0.0;
            for (std::size_t k = 0; k < embeddings[i].size(); ++k) {
                double diff = embeddings[i][k] - embeddings[j][k];
                sum += diff * diff;
            }
            dist[i][j] = std::sqrt(sum);
        }
    }
    std::vector<double> nn(n, std::numeric_limits<double>::max());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) nn[i] = std::min(nn[i], dist[i][j]);
        }
    }
    double mu = 0.0;
    for (double d : nn) mu += d;
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (double d : nn) var += (d - mu) * (d - mu);
    var /= static_cast<double>(n);
    return {var, mu};
}

InstructionRecord viable_record(const std::string& id, RootDomain domain, Source source,
                                double u, int round = 0) {
    InstructionRecord rec;
    rec.id = id;
    rec.text = "text " + id;
    rec.root_domain = domain;
    rec.source = source;
    rec.round_created = round;
    rec.status = RecordStatus::Viable;
    DecomposedElements e;
    e.objectives = {"obj"};
    rec.elements = e;
    rec.objective_count = 1;
    rec.uncertainty = u;
    return rec;
}

}  // namespace

TEST_CASE("unit square: all nearest-neighbor distances equal, variance zero") {
    std::vector<std::vector<double>> square{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    DiversityStats stats = diversity_variance(square);
    CHECK(stats.mean_distance == 1.0);
    CHECK(stats.variance == 0.0);
}

TEST_CASE("collinear points 0, 1, 3 give U = 2/9") {
    std::vector<std::vector<double>> line{{0.0}, {1.0}, {3.0}};
    DiversityStats stats = diversity_variance(line);
    CHECK(stats.mean_distance == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(std::fabs(stats.variance - 2.0 / 9.0) <= 1e-12);
}

TEST_CASE("diversity matches the brute-force oracle on random sets") {
    Rng rng = make_rng(41, {1});
    std::uniform_int_distribution<int> n_pick(2, 200);
    std::uniform_int_distribution<int> dim_pick(1, 8);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);

    for (int trial = 0; trial < 25; ++trial) {
        int n = n_pick(rng);
        int dim = dim_pick(rng);
        std::vector<std::vector<double>> points(static_cast<std::size_t>(n));
        for (auto& p : points) {
            p.resize(static_cast<std::size_t>(dim));
            for (auto& x : p) x = coord(rng);
        }
        DiversityStats fast = diversity_variance(points);
        DiversityStats oracle = brute_force_diversity(points);
        CHECK(std::fabs(fast.variance - oracle.variance) <= 1e-9);
        CHECK(std::fabs(fast.mean_distance - oracle.mean_distance) <= 1e-9);
    }
}

TEST_CASE("U is translation invariant and scales quadratically") {
    Rng rng = make_rng(43, {2});
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<std::vector<double>> points(40, std::vector<double>(3));
    for (auto& p : points) {
        for (auto& x : p) x = coord(rng);
    }
    DiversityStats base = diversity_variance(points);

    auto shifted = points;
    for (auto& p : shifted) {
        p[0] += 13.5;
        p[1] -= 2.25;
        p[2] += 0.75;
    }
    DiversityStats translated = diversity_variance(shifted);
    CHECK(translated.variance == doctest::Approx(base.variance).epsilon(1e-9));

    auto scaled = points;
    for (auto& p : scaled) {
        for (auto& x : p) x *= 3.0;
    }
    DiversityStats stretched = diversity_variance(scaled);
    CHECK(stretched.variance == doctest::Approx(9.0 * base.variance).epsilon(1e-9));
}

TEST_CASE("fewer than two vectors is an error") {
    CHECK_THROWS_AS(diversity_variance({{1.0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(diversity_variance({}), ValidationError);
}

TEST_CASE("uncertainty summary groups by source with deterministic order") {
    SeedPool pool(1);
    pool.insert(viable_record("a", RootDomain::Math, Source::CorpusSeed, 0.1));
    pool.insert(viable_record("b", RootDomain::Math, Source::CorpusSeed, 0.3));
    pool.insert(viable_record("c", RootDomain::Code, Source::DiversifiedVariant, 0.5));

    auto rows = uncertainty_summary(pool);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].group == "corpus-seed");  // alphabetical before diversified-variant
    CHECK(rows[0].mean == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rows[0].median == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rows[0].n == 2);
    CHECK(rows[1].group == "diversified-variant");
    CHECK(rows[1].n == 1);
}

TEST_CASE("domain distribution counts fused records once per parent domain") {
    SeedPool pool(1);
    pool.insert(viable_record("m", RootDomain::Math, Source::CorpusSeed, 0.1));
    pool.insert(viable_record("c", RootDomain::Code, Source::CorpusSeed, 0.1));
    auto fused = viable_record("f", RootDomain::Math, Source::Fused, 0.2, 1);
    fused.parents = {"m", "c"};
    pool.insert(fused);

    auto rows = domain_distribution(pool);
    std::size_t total = 0;
    std::size_t math = 0;
    std::size_t code = 0;
    for (const auto& row : rows) {
        total += row.count;
        if (row.domain == "math") math = row.count;
        if (row.domain == "code") code = row.count;
    }
    CHECK(math == 2);  // the seed plus the fused child's math parent
    CHECK(code == 2);
    // Total = viable + fused (each fused counted twice).
    CHECK(total == pool.viable_count() + 1);
}

TEST_CASE("a pool without fused records matches domain_counts") {
    SeedPool pool(1);
    pool.insert(viable_record("m1", RootDomain::Math, Source::CorpusSeed, 0.1));
    pool.insert(viable_record("m2", RootDomain::Math, Source::CorpusSeed, 0.1));
    pool.insert(viable_record("g", RootDomain::General, Source::CorpusSeed, 0.1));

    auto rows = domain_distribution(pool);
    for (const auto& row : rows) {
        CHECK(row.count ==
              static_cast<std::size_t>(pool.domain_count(root_domain_from_string(row.domain))));
    }
}

TEST_CASE("round distribution partitions the viable pool") {
    SeedPool pool(1);
    pool.insert(viable_record("s1", RootDomain::Math, Source::CorpusSeed, 0.1, 0));
    pool.insert(viable_record("s2", RootDomain::Math, Source::CorpusSeed, 0.1, 0));
    auto child = viable_record("d1", RootDomain::Math, Source::DepthEvolved, 0.2, 1);
    child.parents = {"s1"};
    pool.insert(child);

    auto rows = round_distribution(pool);
    std::size_t total = 0;
    for (const auto& row : rows) total += row.count;
    CHECK(total == pool.viable_count());
}

TEST_CASE("success rate over all-success reports is exactly one") {
    std::vector<RoundReport> reports(3);
    for (auto& r : reports) {
        r.attempted = 16;
        r.viable = 16;
    }
    CHECK(success_rate(reports) == 1.0);
}

TEST_CASE("reference-scale arithmetic: 143917 viable of 144000 attempted") {
    std::vector<RoundReport> reports(6);
    for (auto& r : reports) {
        r.attempted = 24000;
        r.viable = 24000;
    }
    reports[5].viable = 24000 - 83;
    double rate = success_rate(reports);
    CHECK(rate == doctest::Approx(143917.0 / 144000.0).epsilon(1e-15));
    CHECK(rate > 0.9994);
}

TEST_CASE("an empty run log is an error") {
    CHECK_THROWS_AS(success_rate({}), ValidationError);
}

TEST_CASE("pca projects onto two coordinates") {
    Rng rng = make_rng(47, {3});
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<std::vector<double>> points(30, std::vector<double>(6));
    for (auto& p : points) {
        for (auto& x : p) x = coord(rng);
    }
    auto coords = pca_2d(points);
    CHECK(coords.size() == 30);
}

TEST_CASE("csv tables carry the fixed column headers") {
    CHECK(to_csv(std::vector<DomainRow>{{"math", 3}}) == "domain,count\nmath,3\n");
    CHECK(to_csv(std::vector<RoundRow>{{1, "fused", 2}}).rfind("round,source,count\n", 0) == 0);
    CHECK(to_csv(std::vector<UncertaintyRow>{}).rfind("group,mean,median,stddev,n\n", 0) == 0);
}
