#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoforge/elements.hpp"
#include "evoforge/gateway/gateway.hpp"
#include "evoforge/ids.hpp"
#include "evoforge/pool.hpp"
#include "evoforge/rng.hpp"
#include "evoforge/sampler.hpp"
#include "evoforge/scorer.hpp"

namespace evoforge {

inline constexpr const char* kEvolverBackendId = "evolver";

enum class EvolutionKind { Depth, Fusion };

// A parsed evolver reply: the new instruction plus its own element sections.
struct EvolvedOutput {
    std::string prompt;
    DecomposedElements elements;
};

// Per-round viability accounting, one JSON object per round in the run log.
struct RoundReport {
    int round = 0;
    int attempted = 0;
    int viable = 0;
    int parse_failed = 0;
    int backend_failed = 0;
    int depth_attempted = 0;
    int depth_viable = 0;
    int fusion_in_attempted = 0;
    int fusion_in_viable = 0;
    int fusion_cross_attempted = 0;
    int fusion_cross_viable = 0;
};

// Depth prompt: the template's final "### Original" block carries the
// record's text and its extracted elements.
std::string build_depth_prompt(const InstructionRecord& record);

// Fusion prompt: a fills Given Prompt A, b fills Given Prompt B. Order
// matters; the child inherits a's root domain.
std::string build_fusion_prompt(const InstructionRecord& a, const InstructionRecord& b);

// Depth replies are read from the "### Rewritten" block ("**Prompt:**" plus
// element sections, "Objective" and "Objectives" both accepted); fusion
// replies from the "**Fused ...:**" sections. Missing prompt or empty
// objectives yields nullopt.
std::optional<EvolvedOutput> parse_evolved(std::string_view reply, EvolutionKind kind);

// One evolution round: samples candidates, runs the evolver, parses and
// scores children, merges them into the pool (failures included, as
// non-viable records), advances the round index. Partial failures land in
// the report; they never abort the round.
RoundReport run_round(SeedPool& pool, const RoundPlan& plan, Gateway& gateway,
                      const PerturbationConfig& scoring, IdGenerator& ids, Rng& rng,
                      int workers = 1);

void append_round_report(const RoundReport& report, const std::filesystem::path& run_log);
std::vector<RoundReport> load_round_reports(const std::filesystem::path& run_log);

}  // namespace evoforge
