#include "evoforge/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "evoforge/decomposer.hpp"
#include "evoforge/errors.hpp"
#include "evoforge/gateway/http_backend.hpp"
#include "evoforge/parallel.hpp"
#include "evoforge/store.hpp"

namespace evoforge {
namespace {

using ordered_json = nlohmann::ordered_json;

double role_default_temperature(const std::string& role) {
    // Deterministic parsing paths get deterministic backends.
    if (role == kDecomposerBackendId || role == kScorerBackendId) return 0.0;
    return 0.7;
}

std::shared_ptr<Backend> build_backend(const std::string& role, const BackendConfig& cfg,
                                       const std::shared_ptr<ScriptedSimulator>& simulator) {
    if (cfg.type == "mock") {
        return make_scripted_backend(simulator);
    }
    HttpBackendConfig http;
    http.base_url = cfg.base_url;
    http.model = cfg.model;
    http.temperature = cfg.temperature >= 0.0 ? cfg.temperature : role_default_temperature(role);
    http.max_tokens = cfg.max_tokens;
    if (!cfg.api_key_env.empty()) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (!key) {
            throw ValidationError("backend " + role + ": environment variable " +
                                  cfg.api_key_env + " is not set");
        }
        http.api_key = key;
    }
    return std::make_shared<HttpBackend>(http);
}

}  // namespace

GatewayBundle build_gateway(const PipelineConfig& config) {
    GatewayOptions options;
    options.retry.max_attempts = config.gateway.max_attempts;
    options.retry.initial_backoff = std::chrono::milliseconds(config.gateway.backoff_ms);
    options.max_in_flight = config.gateway.max_in_flight;
    options.min_backend_interval =
        std::chrono::milliseconds(config.gateway.min_backend_interval_ms);
    options.cache_dir = config.cache_dir;

    GatewayBundle bundle;
    bundle.gateway = std::make_unique<Gateway>(options);

    bool any_mock = false;
    for (const auto& [role, backend] : config.backends) any_mock |= backend.type == "mock";
    if (any_mock) bundle.simulator = std::make_shared<ScriptedSimulator>(config.mock);

    for (const auto& [role, backend] : config.backends) {
        bundle.gateway->add_backend(role, build_backend(role, backend, bundle.simulator));
    }
    return bundle;
}

StoreLock::StoreLock(const std::filesystem::path& store) {
    lock_path_ = store;
    lock_path_ += ".lock";
    if (lock_path_.has_parent_path()) std::filesystem::create_directories(lock_path_.parent_path());
    fd_ = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
        throw ValidationError("store is locked by another invocation (" + lock_path_.string() +
                              " exists)");
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto written = ::write(fd_, pid.data(), pid.size());
}

StoreLock::~StoreLock() {
    if (fd_ >= 0) {
        ::close(fd_);
        std::error_code ec;
        std::filesystem::remove(lock_path_, ec);
    }
}

std::vector<std::string> load_corpus(const SourceConfig& source) {
    std::ifstream in(source.path, std::ios::binary);
    if (!in) throw ValidationError("cannot read corpus file: " + source.path.string());

    const auto ext = source.path.extension().string();
    const bool jsonl = ext == ".jsonl" || ext == ".json";

    std::vector<std::string> texts;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (jsonl) {
            try {
                ordered_json j = ordered_json::parse(line);
                texts.push_back(j.at(source.text_field).get<std::string>());
            } catch (const std::exception& e) {
                throw StoreError(source.path.string() + ": " + e.what(), line_no);
            }
        } else {
            texts.push_back(line);
        }
    }
    if (texts.empty()) throw ValidationError("corpus is empty: " + source.path.string());
    return texts;
}

SeedStageResult run_seed_stage(const PipelineConfig& config, Gateway& gateway, SeedPool& pool) {
    if (config.seeding.sources.empty()) {
        throw ValidationError("seeding needs at least one corpus source");
    }
    IdGenerator ids = IdGenerator::resume(pool);
    SeedStageResult result;

    for (std::size_t source_index = 0; source_index < config.seeding.sources.size();
         ++source_index) {
        const SourceConfig& source = config.seeding.sources[source_index];
        auto texts = load_corpus(source);

        Rng rng = make_rng(config.rng_seed, {rng_stream::kClustering, source_index});
        ClusteringReport report =
            cluster_source(source.path.filename().string(), texts, config.seeding.k_range,
                           gateway, rng, config.seeding.kmeans);
        auto representatives = sample_cluster_representatives(report, rng);

        std::vector<InstructionRecord> seeds;
        seeds.reserve(representatives.size());
        for (std::size_t index : representatives) {
            InstructionRecord seed;
            seed.id = ids.next();
            seed.text = texts[index];
            seed.root_domain = source.domain;
            seed.source = Source::CorpusSeed;
            seed.round_created = 0;
            seeds.push_back(std::move(seed));
        }

        parallel_map(seeds.size(), config.workers, [&](std::size_t i) {
            decompose(seeds[i], gateway);
            return 0;
        });

        std::vector<InstructionRecord> variants;
        for (auto& seed : seeds) {
            result.seeds += 1;
            result.round0.attempted += 1;
            switch (seed.status) {
                case RecordStatus::Viable: result.round0.viable += 1; break;
                case RecordStatus::ParseFailed:
                    result.round0.parse_failed += 1;
                    result.decompose_failures += 1;
                    break;
                default:
                    result.round0.backend_failed += 1;
                    result.decompose_failures += 1;
                    break;
            }
            if (seed.viable() && config.seeding.variants_per_seed > 0) {
                result.round0.attempted += config.seeding.variants_per_seed;
                try {
                    auto d = diversify(seed, config.seeding.variants_per_seed, gateway, ids);
                    if (d.shortfall()) {
                        // The reply held fewer parseable prompts than asked for.
                        result.variant_shortfalls += d.requested - d.parsed;
                        result.round0.parse_failed += d.requested - d.parsed;
                    }
                    for (auto& v : d.variants) variants.push_back(std::move(v));
                } catch (const BackendError&) {
                    result.round0.backend_failed += config.seeding.variants_per_seed;
                }
            }
            pool.insert(std::move(seed));
        }

        parallel_map(variants.size(), config.workers, [&](std::size_t i) {
            decompose(variants[i], gateway);
            return 0;
        });
        for (auto& variant : variants) {
            result.variants += 1;
            switch (variant.status) {
                case RecordStatus::Viable: result.round0.viable += 1; break;
                case RecordStatus::ParseFailed:
                    result.round0.parse_failed += 1;
                    result.decompose_failures += 1;
                    break;
                default:
                    result.round0.backend_failed += 1;
                    result.decompose_failures += 1;
                    break;
            }
            pool.insert(std::move(variant));
        }

        result.reports.push_back(std::move(report));
    }
    result.round0.round = 0;
    append_round_report(result.round0, config.run_log);
    return result;
}

ScoreStageResult run_score_stage(const PipelineConfig& config, Gateway& gateway, SeedPool& pool) {
    ScoreStageResult result;

    // Phase 1: responses. Compute in parallel, commit serially in pool order.
    std::vector<std::string> needs_response;
    for (const auto& rec : pool.records()) {
        if (rec.viable() && !rec.response) needs_response.push_back(rec.id);
    }
    auto responses = parallel_map(needs_response.size(), config.workers, [&](std::size_t i) {
        InstructionRecord copy = pool.at(needs_response[i]);
        generate_response(copy, gateway);
        return copy;
    });
    for (auto& copy : responses) {
        if (copy.response) {
            pool.set_response(copy.id, *copy.response);
            result.responses_generated += 1;
        } else {
            pool.set_status(copy.id, RecordStatus::BackendFailed);
            result.response_failures += 1;
        }
    }

    // Phase 2: uncertainties.
    std::vector<std::string> needs_score;
    for (const auto& rec : pool.records()) {
        if (rec.viable() && rec.response && !rec.uncertainty) needs_score.push_back(rec.id);
    }
    auto scores = parallel_map(needs_score.size(), config.workers, [&](std::size_t i) {
        InstructionRecord copy = pool.at(needs_score[i]);
        return score_uncertainty(copy, config.scoring, gateway);
    });
    for (std::size_t i = 0; i < needs_score.size(); ++i) {
        if (scores[i]) {
            pool.set_uncertainty(needs_score[i], *scores[i]);
            result.records_scored += 1;
        } else {
            result.scoring_failures += 1;  // record keeps its previous uncertainty
        }
    }
    return result;
}

std::vector<RoundReport> run_evolve_stage(const PipelineConfig& config, Gateway& gateway,
                                          SeedPool& pool, int target_rounds) {
    if (target_rounds < 0) throw ValidationError("rounds must be >= 0");

    RoundPlan plan;
    plan.m_depth = config.evolution.m_depth;
    plan.m_fusion = config.evolution.m_fusion;
    plan.epsilon_u = config.evolution.epsilon_u;
    plan.validate();

    std::vector<RoundReport> reports;
    while (pool.round() < target_rounds) {
        for (const auto* rec : pool.viable_records()) {
            if (!rec->uncertainty) {
                throw ValidationError("pool is not fully scored (record " + rec->id +
                                      "); run the score stage first");
            }
        }
        Rng rng = make_rng(pool.rng_seed(),
                           {rng_stream::kRound, static_cast<std::uint64_t>(pool.round())});
        IdGenerator ids = IdGenerator::resume(pool);
        RoundReport report =
            run_round(pool, plan, gateway, config.scoring, ids, rng, config.workers);
        save_pool(pool, config.store);
        append_round_report(report, config.run_log);
        reports.push_back(report);
    }
    return reports;
}

std::size_t export_pairs(const SeedPool& pool, const std::filesystem::path& out_path) {
    namespace fs = std::filesystem;
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    fs::path tmp = out_path;
    tmp += ".tmp";
    std::size_t written = 0;
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError("cannot open " + tmp.string() + " for writing");
        for (const auto& rec : pool.records()) {
            if (!rec.viable() || !rec.response) continue;
            ordered_json j;
            j["instruction"] = rec.text;
            j["response"] = *rec.response;
            out << j.dump() << '\n';
            ++written;
        }
    }
    fs::rename(tmp, out_path);
    return written;
}

void write_clustering_reports(const std::vector<ClusteringReport>& reports,
                              const std::filesystem::path& out_path) {
    namespace fs = std::filesystem;
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["source"] = r.source;
        j["k_values"] = r.k_values;
        j["inertia"] = r.inertia;
        j["chosen_k"] = r.chosen_k;
        j["assignment"] = r.assignment;
        arr.push_back(std::move(j));
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot open " + out_path.string() + " for writing");
    out << arr.dump(2) << '\n';
}

}  // namespace evoforge
