#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoforge/gateway/gateway.hpp"
#include "evoforge/gateway/mock_backend.hpp"
#include "evoforge/record.hpp"
#include "evoforge/scorer.hpp"
#include "evoforge/seeder.hpp"

namespace evoforge {

// One configured model endpoint. type is "openai" (HTTP, OpenAI-compatible)
// or "mock" (the deterministic scripted simulator).
struct BackendConfig {
    std::string type = "mock";
    std::string base_url;
    std::string model;
    std::string api_key_env;   // environment variable holding the key
    double temperature = -1.0; // < 0: role default (0 for decomposer/scorer, else 0.7)
    int max_tokens = 1024;
};

struct SourceConfig {
    std::filesystem::path path;
    RootDomain domain = RootDomain::General;
    std::string text_field = "instruction";  // for JSONL corpora
};

struct SeedingConfig {
    std::vector<SourceConfig> sources;
    KRange k_range;
    int variants_per_seed = 3;
    KMeansOptions kmeans;
};

struct EvolutionConfig {
    int m_depth = 8;
    int m_fusion = 8;
    double epsilon_u = 1e-6;
};

struct GatewayConfig {
    int max_attempts = 3;
    int backoff_ms = 250;
    int max_in_flight = 8;
    int min_backend_interval_ms = 0;
};

// The declarative run configuration; flags override individual fields.
struct PipelineConfig {
    std::uint64_t rng_seed = 0;  // mandatory in the file
    std::filesystem::path store = "pool.jsonl";
    std::filesystem::path run_log = "run_log.jsonl";
    std::optional<std::filesystem::path> cache_dir;
    std::map<std::string, BackendConfig> backends;  // role -> endpoint
    SeedingConfig seeding;
    PerturbationConfig scoring;
    EvolutionConfig evolution;
    GatewayConfig gateway;
    SimulatorOptions mock;  // knobs for mock backends
    int workers = 1;
};

// Loads and validates a JSON config file. Relative paths resolve against
// the config file's directory. Throws ValidationError.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace evoforge
