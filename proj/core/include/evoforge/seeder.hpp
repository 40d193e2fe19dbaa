#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "evoforge/gateway/gateway.hpp"
#include "evoforge/ids.hpp"
#include "evoforge/record.hpp"
#include "evoforge/rng.hpp"

namespace evoforge {

inline constexpr const char* kEmbedderBackendId = "embedder";

struct KRange {
    int min_k = 1;
    int max_k = 8;  // inclusive

    void validate() const;
    std::vector<int> values() const;
};

struct ClusteringReport {
    std::string source;
    std::vector<int> k_values;
    std::vector<double> inertia;    // one per k, in k order
    int chosen_k = 0;
    std::vector<int> assignment;    // cluster index per input text, for chosen_k
};

struct KMeansOptions {
    int max_iterations = 100;
    int restarts = 4;  // best-of-n seeded restarts per k
};

// Lloyd's k-means with k-means++ seeding, Euclidean on the given vectors.
// Returns (assignment, inertia). Deterministic given the rng state.
std::pair<std::vector<int>, double> kmeans(const std::vector<std::vector<double>>& points, int k,
                                           Rng& rng, const KMeansOptions& options = {});

// Runs k-means for every k in range and picks the elbow: the k with the
// largest discrete second difference of inertia (smallest k if the range
// has no interior point).
ClusteringReport cluster_source(const std::string& source_name,
                                const std::vector<std::vector<double>>& embeddings, KRange range,
                                Rng& rng, const KMeansOptions& options = {});

// Embedding-fetching convenience over the gateway (vectors arrive unit-norm).
ClusteringReport cluster_source(const std::string& source_name,
                                const std::vector<std::string>& texts, KRange range,
                                Gateway& gateway, Rng& rng, const KMeansOptions& options = {},
                                const std::string& backend_id = kEmbedderBackendId);

// One uniformly drawn member per cluster, ordered by cluster index.
std::vector<std::size_t> sample_cluster_representatives(const ClusteringReport& report, Rng& rng);

struct DiversifyResult {
    std::vector<InstructionRecord> variants;
    int requested = 0;
    int parsed = 0;

    bool shortfall() const { return parsed < requested; }
};

std::string build_diversification_prompt(const InstructionRecord& seed);

// Every "**New Prompt n:**" body, in reply order.
std::vector<std::string> parse_new_prompts(std::string_view reply);

// Asks the evolver backend for objective-shifted variants of a decomposed
// seed. Returns up to variant_count records (source diversified-variant,
// domain inherited, no parents, round 0); fewer parseable prompts than
// requested is reported as a shortfall, not an error.
DiversifyResult diversify(const InstructionRecord& seed, int variant_count, Gateway& gateway,
                          IdGenerator& ids, const std::string& backend_id = "evolver");

}  // namespace evoforge
