#include "evoforge/sampler.hpp"

#include <algorithm>
#include <cstdio>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

// One weighted draw from (ids, weights); weights need not be normalized.
std::size_t weighted_draw(const std::vector<double>& weights, double total, Rng& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double threshold = uniform(rng) * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i];
        if (threshold < cumulative && weights[i] > 0.0) return i;
    }
    // Rounding fell past the end; take the last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    throw ValidationError("weighted draw over all-zero weights");
}

std::vector<const InstructionRecord*> scored_viable(const SeedPool& pool) {
    auto records = pool.viable_records();
    for (const auto* rec : records) {
        if (!rec->uncertainty) {
            throw ValidationError("record " + rec->id + " is viable but unscored");
        }
    }
    return records;
}

}  // namespace

void RoundPlan::validate() const {
    if (m_depth < 0) throw ValidationError("m_depth must be >= 0");
    if (m_fusion < 0) throw ValidationError("m_fusion must be >= 0");
    if (m_fusion % 2 != 0) throw ValidationError("m_fusion must be even");
    if (!(epsilon_u > 0.0)) throw ValidationError("epsilon_u must be > 0");
    if (fusion_attempt_factor < 1) throw ValidationError("fusion_attempt_factor must be >= 1");
}

std::vector<std::pair<std::string, double>> depth_weights(const SeedPool& pool) {
    auto records = scored_viable(pool);
    if (records.empty()) return {};

    double total = 0.0;
    for (const auto* rec : records) total += *rec->uncertainty;

    std::vector<std::pair<std::string, double>> weights;
    weights.reserve(records.size());
    if (total <= 0.0) {
        std::fprintf(stderr,
                     "[sampler] all uncertainties are zero; falling back to uniform weights\n");
        double p = 1.0 / static_cast<double>(records.size());
        for (const auto* rec : records) weights.emplace_back(rec->id, p);
        return weights;
    }
    for (const auto* rec : records) weights.emplace_back(rec->id, *rec->uncertainty / total);
    return weights;
}

std::vector<std::string> sample_depth_candidates(const SeedPool& pool, const RoundPlan& plan,
                                                 Rng& rng) {
    plan.validate();
    if (plan.m_depth == 0) return {};

    auto weighted = depth_weights(pool);
    if (weighted.size() < static_cast<std::size_t>(plan.m_depth)) {
        throw ValidationError("depth plan needs " + std::to_string(plan.m_depth) +
                              " viable records, pool has " + std::to_string(weighted.size()) +
                              " (short by " +
                              std::to_string(plan.m_depth - static_cast<int>(weighted.size())) +
                              ")");
    }

    std::vector<double> weights;
    weights.reserve(weighted.size());
    double total = 0.0;
    for (const auto& [id, p] : weighted) {
        weights.push_back(p);
        total += p;
    }

    // Successive draws without replacement, renormalizing by running total.
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(plan.m_depth));
    for (int k = 0; k < plan.m_depth; ++k) {
        std::size_t i = weighted_draw(weights, total, rng);
        out.push_back(weighted[i].first);
        total -= weights[i];
        weights[i] = 0.0;
    }
    return out;
}

std::vector<std::pair<std::string, double>> fusion_weights(const SeedPool& pool,
                                                           double epsilon_u) {
    if (!(epsilon_u > 0.0)) throw ValidationError("epsilon_u must be > 0");
    auto records = scored_viable(pool);

    std::vector<std::pair<std::string, double>> weights;
    weights.reserve(records.size());
    double total = 0.0;
    for (const auto* rec : records) {
        if (rec->objective_count < 1) {
            throw ValidationError("record " + rec->id + " has no objectives");
        }
        double n_root = static_cast<double>(pool.domain_count(rec->root_domain));
        double s = 1.0 / (static_cast<double>(rec->fusion_use_count + 1) *
                          static_cast<double>(rec->objective_count) * n_root *
                          std::max(*rec->uncertainty, epsilon_u));
        weights.emplace_back(rec->id, s);
        total += s;
    }
    for (auto& [id, s] : weights) s /= total;
    return weights;
}

std::vector<FusionPair> sample_fusion_pairs(const SeedPool& pool, const RoundPlan& plan,
                                            Rng& rng) {
    plan.validate();
    if (plan.m_fusion == 0) return {};
    if (pool.viable_count() < 2) {
        throw ValidationError("fusion needs at least 2 viable records");
    }

    auto weighted = fusion_weights(pool, plan.epsilon_u);
    std::vector<double> weights;
    weights.reserve(weighted.size());
    double total = 0.0;
    for (const auto& [id, p] : weighted) {
        weights.push_back(p);
        total += p;
    }
    auto domain_of = [&pool](const std::string& id) { return pool.at(id).root_domain; };

    const int target_each = plan.m_fusion / 2;
    const long draw_budget = static_cast<long>(plan.fusion_attempt_factor) *
                             static_cast<long>(plan.m_fusion);
    long draws = 0;

    auto draw_anchors = [&](int count) {
        std::vector<std::string> anchors;
        anchors.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            anchors.push_back(weighted[weighted_draw(weights, total, rng)].first);
        }
        return anchors;
    };

    std::vector<FusionPair> in_domain;
    std::vector<FusionPair> cross_domain;
    std::vector<std::string> anchors = draw_anchors(plan.m_fusion);
    std::size_t idx = 0;

    while (static_cast<int>(in_domain.size()) < target_each ||
           static_cast<int>(cross_domain.size()) < target_each) {
        int accepted = static_cast<int>(in_domain.size() + cross_domain.size());
        int remain = plan.m_fusion - accepted;

        // All anchors consumed while a bucket is unfilled: fresh draw of the
        // remaining size.
        if (idx >= anchors.size()) {
            anchors = draw_anchors(remain);
            idx = 0;
        }

        for (int c = 0; c < remain; ++c) {
            if (idx >= anchors.size()) break;
            if (draws >= draw_budget) {
                throw PartialPlanError(static_cast<int>(in_domain.size()),
                                       static_cast<int>(cross_domain.size()), target_each);
            }
            ++draws;
            const std::string& b = weighted[weighted_draw(weights, total, rng)].first;
            const std::string& a = anchors[idx];
            if (a == b) continue;  // self-draw: rejected and redrawn

            if (domain_of(a) == domain_of(b)) {
                if (static_cast<int>(in_domain.size()) < target_each) {
                    in_domain.push_back({a, b, FusionKind::InDomain});
                    ++idx;
                }
            } else {
                if (static_cast<int>(cross_domain.size()) < target_each) {
                    cross_domain.push_back({a, b, FusionKind::CrossDomain});
                    ++idx;
                }
            }
        }
    }

    std::vector<FusionPair> pairs = std::move(in_domain);
    pairs.insert(pairs.end(), cross_domain.begin(), cross_domain.end());
    return pairs;
}

void record_fusion_use(SeedPool& pool, const FusionPair& pair) {
    pool.increment_fusion_use(pair.a);
    pool.increment_fusion_use(pair.b);
}

}  // namespace evoforge
