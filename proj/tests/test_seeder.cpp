#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "evoforge/errors.hpp"
#include "evoforge/gateway/mock_backend.hpp"
#include "evoforge/seeder.hpp"

using namespace evoforge;

namespace {

// Three tight, well-separated blobs in 2-D.
std::vector<std::vector<double>> three_blobs(Rng& rng, int per_blob) {
    const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::vector<double>> points;
    for (int b = 0; b < 3; ++b) {
        for (int i = 0; i < per_blob; ++i) {
            points.push_back({centers[b][0] + noise(rng), centers[b][1] + noise(rng)});
        }
    }
    return points;
}

// Independent inertia oracle: best-of-all-assignments given fixed centers is
// exactly what k-means converges to per cluster, so recompute from the
// returned assignment with centroid means.
double inertia_oracle(const std::vector<std::vector<double>>& points,
                      const std::vector<int>& assignment, int k) {
    std::vector<std::vector<double>> centroid(static_cast<std::size_t>(k),
                                              std::vector<double>(points[0].size(), 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        counts[static_cast<std::size_t>(assignment[i])] += 1;
        for (std::size_t d = 0; d < points[i].size(); ++d) {
            centroid[static_cast<std::size_t>(assignment[i])][d] += points[i][d];
        }
    }
    for (int c = 0; c < k; ++c) {
        for (auto& v : centroid[static_cast<std::size_t>(c)]) {
            v /= std::max(1, counts[static_cast<std::size_t>(c)]);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t d = 0; d < points[i].size(); ++d) {
            double diff = points[i][d] - centroid[static_cast<std::size_t>(assignment[i])][d];
            total += diff * diff;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("three separated blobs elbow at k = 3") {
    Rng data_rng = make_rng(11, {1});
    auto points = three_blobs(data_rng, 12);

    Rng rng = make_rng(11, {2});
    ClusteringReport report = cluster_source("blobs", points, {1, 6}, rng);
    CHECK(report.chosen_k == 3);

    // All three blobs land in distinct clusters.
    std::set<int> first_blob(report.assignment.begin(), report.assignment.begin() + 12);
    std::set<int> second_blob(report.assignment.begin() + 12, report.assignment.begin() + 24);
    std::set<int> third_blob(report.assignment.begin() + 24, report.assignment.end());
    CHECK(first_blob.size() == 1);
    CHECK(second_blob.size() == 1);
    CHECK(third_blob.size() == 1);
    CHECK(*first_blob.begin() != *second_blob.begin());
    CHECK(*second_blob.begin() != *third_blob.begin());

    // Reported inertia matches the oracle recomputation for chosen_k.
    auto it = std::find(report.k_values.begin(), report.k_values.end(), report.chosen_k);
    double reported = report.inertia[static_cast<std::size_t>(it - report.k_values.begin())];
    double recomputed = inertia_oracle(points, report.assignment, report.chosen_k);
    CHECK(reported == doctest::Approx(recomputed).epsilon(1e-9));
}

TEST_CASE("inertia is non-increasing in k on the blob fixture") {
    Rng data_rng = make_rng(13, {1});
    auto points = three_blobs(data_rng, 10);
    Rng rng = make_rng(13, {2});
    ClusteringReport report = cluster_source("blobs", points, {1, 6}, rng);
    for (std::size_t i = 1; i < report.inertia.size(); ++i) {
        CHECK(report.inertia[i] <= report.inertia[i - 1] + 1e-9);
    }
}

TEST_CASE("a k range of exactly {1} is the forced single cluster") {
    Rng data_rng = make_rng(17, {1});
    auto points = three_blobs(data_rng, 4);
    Rng rng = make_rng(17, {2});
    ClusteringReport report = cluster_source("one", points, {1, 1}, rng);
    CHECK(report.chosen_k == 1);
    for (int a : report.assignment) CHECK(a == 0);
}

TEST_CASE("identical seeds give identical assignments") {
    Rng data_rng = make_rng(19, {1});
    auto points = three_blobs(data_rng, 8);
    Rng rng_a = make_rng(19, {2});
    Rng rng_b = make_rng(19, {2});
    ClusteringReport a = cluster_source("x", points, {1, 5}, rng_a);
    ClusteringReport b = cluster_source("x", points, {1, 5}, rng_b);
    CHECK(a.chosen_k == b.chosen_k);
    CHECK(a.assignment == b.assignment);
    CHECK(a.inertia == b.inertia);
}

TEST_CASE("fewer texts than the largest k is an error") {
    std::vector<std::vector<double>> two_points{{0.0}, {1.0}};
    Rng rng = make_rng(1, {1});
    CHECK_THROWS_AS(cluster_source("tiny", two_points, {1, 5}, rng), ValidationError);
}

TEST_CASE("representatives: one per cluster, singletons forced, reproducible") {
    ClusteringReport report;
    report.source = "s";
    report.chosen_k = 5;
    // Clusters 0..4; cluster 3 is a singleton at index 9.
    report.assignment = {0, 0, 1, 1, 2, 2, 4, 4, 4, 3};

    Rng rng_a = make_rng(23, {1});
    auto picks_a = sample_cluster_representatives(report, rng_a);
    REQUIRE(picks_a.size() == 5);

    std::set<int> seen_clusters;
    for (std::size_t index : picks_a) {
        seen_clusters.insert(report.assignment[index]);
    }
    CHECK(seen_clusters.size() == 5);
    CHECK(picks_a[3] == 9);  // the singleton's only member

    Rng rng_b = make_rng(23, {1});
    CHECK(sample_cluster_representatives(report, rng_b) == picks_a);
}

TEST_CASE("diversify parses New Prompt sections and truncates to the request") {
    auto backend = std::make_shared<MockBackend>();
    backend->set_chat([](const ChatRequest&) {
        return std::string("**New Prompt 1:**\nA\n\n**New Prompt 2:**\nB\n\n"
                           "**New Prompt 3:**\nC\n\n**New Prompt 4:**\nD\n");
    });
    GatewayOptions options;
    options.retry.initial_backoff = std::chrono::milliseconds(0);
    Gateway gateway(options);
    gateway.add_backend("evolver", backend);

    InstructionRecord seed;
    seed.id = "s";
    seed.text = "Original seed text.";
    seed.root_domain = RootDomain::Math;
    seed.status = RecordStatus::Viable;
    DecomposedElements e;
    e.objectives = {"Original objective."};
    seed.elements = e;
    seed.objective_count = 1;

    IdGenerator ids("t-", 1);
    DiversifyResult result = diversify(seed, 3, gateway, ids);
    REQUIRE(result.variants.size() == 3);
    CHECK_FALSE(result.shortfall());
    CHECK(result.variants[0].text == "A");
    CHECK(result.variants[2].text == "C");
    for (const auto& v : result.variants) {
        CHECK(v.root_domain == RootDomain::Math);
        CHECK(v.source == Source::DiversifiedVariant);
        CHECK(v.parents.empty());
        CHECK(v.round_created == 0);
    }
}

TEST_CASE("a partial diversification reply returns what parsed plus a shortfall flag") {
    auto backend = std::make_shared<MockBackend>();
    backend->set_chat([](const ChatRequest&) {
        return std::string("**New Prompt 1:**\nA\n\n**New Prompt 2:**\nB\n");
    });
    GatewayOptions options;
    Gateway gateway(options);
    gateway.add_backend("evolver", backend);

    InstructionRecord seed;
    seed.id = "s";
    seed.text = "Seed.";
    DecomposedElements e;
    e.objectives = {"O."};
    seed.elements = e;
    seed.objective_count = 1;

    IdGenerator ids("t-", 1);
    DiversifyResult result = diversify(seed, 3, gateway, ids);
    CHECK(result.variants.size() == 2);
    CHECK(result.shortfall());
    CHECK(result.parsed == 2);
    CHECK(result.requested == 3);
}

TEST_CASE("the scripted simulator yields ten parseable new prompts") {
    ScriptedSimulator simulator;
    InstructionRecord seed;
    seed.text = "Translate a paragraph into French.";
    DecomposedElements e;
    e.objectives = {"Translate the paragraph."};
    seed.elements = e;
    seed.objective_count = 1;
    std::string reply = simulator.chat_reply(build_diversification_prompt(seed));
    auto prompts = parse_new_prompts(reply);
    CHECK(prompts.size() == 10);
    for (const auto& p : prompts) {
        CHECK(p.find("Translate a paragraph into French.") != std::string::npos);
    }
}
