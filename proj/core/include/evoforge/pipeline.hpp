#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "evoforge/config.hpp"
#include "evoforge/evolver.hpp"
#include "evoforge/gateway/gateway.hpp"
#include "evoforge/pool.hpp"
#include "evoforge/seeder.hpp"

namespace evoforge {

// Gateway plus the simulator shared by any mock backends (null when the
// config is all-HTTP).
struct GatewayBundle {
    std::unique_ptr<Gateway> gateway;
    std::shared_ptr<ScriptedSimulator> simulator;
};

GatewayBundle build_gateway(const PipelineConfig& config);

// Exclusive ownership of a store for the duration of a mutating command.
class StoreLock {
public:
    explicit StoreLock(const std::filesystem::path& store);
    ~StoreLock();
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    std::filesystem::path lock_path_;
    int fd_ = -1;
};

struct SeedStageResult {
    std::vector<ClusteringReport> reports;
    RoundReport round0;  // seeding viability accounting (round index 0)
    int seeds = 0;
    int variants = 0;
    int decompose_failures = 0;
    int variant_shortfalls = 0;
};

// Round 0: ingest corpora, cluster, pick representatives, decompose,
// diversify. Appends the round-0 report to the run log, so the success-rate
// statistic covers seeding attempts the way the round accounting treats
// evolution attempts. The caller owns persisting the pool afterwards.
SeedStageResult run_seed_stage(const PipelineConfig& config, Gateway& gateway, SeedPool& pool);

struct ScoreStageResult {
    int responses_generated = 0;
    int records_scored = 0;
    int response_failures = 0;
    int scoring_failures = 0;
};

// Fills responses and uncertainties for viable records missing them.
// Idempotent: a fully scored pool triggers no backend traffic.
ScoreStageResult run_score_stage(const PipelineConfig& config, Gateway& gateway, SeedPool& pool);

// Advances the pool until pool.round() == target_rounds, committing the
// store and appending one run-log report after every round. Re-invoking
// after an interruption resumes at the next uncommitted round.
std::vector<RoundReport> run_evolve_stage(const PipelineConfig& config, Gateway& gateway,
                                          SeedPool& pool, int target_rounds);

// Training-format export: {"instruction","response"} JSONL of viable
// records that carry responses. Returns the number written.
std::size_t export_pairs(const SeedPool& pool, const std::filesystem::path& out_path);

void write_clustering_reports(const std::vector<ClusteringReport>& reports,
                              const std::filesystem::path& out_path);

// Corpus ingestion: ".jsonl"/".json" files read text_field per line,
// anything else is one instruction per non-empty line.
std::vector<std::string> load_corpus(const SourceConfig& source);

}  // namespace evoforge
