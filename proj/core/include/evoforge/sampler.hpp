#pragma once

#include <string>
#include <utility>
#include <vector>

#include "evoforge/pool.hpp"
#include "evoforge/rng.hpp"

namespace evoforge {

// Per-round evolution budgets. m_fusion must be even: pairs split half
// in-domain, half cross-domain.
struct RoundPlan {
    int m_depth = 0;
    int m_fusion = 0;
    double epsilon_u = 1e-6;        // uncertainty floor in the fusion weight
    int fusion_attempt_factor = 50; // candidate-draw budget = factor * m_fusion

    void validate() const;
};

enum class FusionKind { InDomain, CrossDomain };

// A fusion pair; the fused child inherits a's root domain.
struct FusionPair {
    std::string a;
    std::string b;
    FusionKind kind;
};

// Depth-evolution weights: p_i = u_i / sum(u). All-zero uncertainties fall
// back to uniform weights with a logged warning. Entries follow pool
// insertion order. Requires every viable record to be scored.
std::vector<std::pair<std::string, double>> depth_weights(const SeedPool& pool);

// m_depth distinct ids by successive weighted draws without replacement.
std::vector<std::string> sample_depth_candidates(const SeedPool& pool, const RoundPlan& plan,
                                                 Rng& rng);

// Fusion weights: uncertainty dampened by use count, objective count, and
// domain frequency, favoring low-u, rarely used, rare-domain records.
// s_i = 1 / ((n_c+1) * n_obj * n_root * max(u, epsilon)), p_i = s_i / sum(s).
// n_root is the live viable count of the record's root domain.
std::vector<std::pair<std::string, double>> fusion_weights(const SeedPool& pool, double epsilon_u);

// Task-fusion pair construction: draws an anchor list by fusion weights,
// then draws candidate batches, pairing each candidate with the current
// anchor and accepting only while the matching bucket (in-domain /
// cross-domain) is unfilled. Self-draws are rejected and redrawn. Exactly
// m_fusion/2 pairs of each kind, or PartialPlanError once the attempt
// budget runs out (e.g. a single-domain pool).
std::vector<FusionPair> sample_fusion_pairs(const SeedPool& pool, const RoundPlan& plan, Rng& rng);

// Fusion-use bookkeeping: both members of a sampled pair were "used",
// whether or not the evolver call later succeeds.
void record_fusion_use(SeedPool& pool, const FusionPair& pair);

}  // namespace evoforge
