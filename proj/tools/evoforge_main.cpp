#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "evoforge/config.hpp"
#include "evoforge/errors.hpp"
#include "evoforge/metrics.hpp"
#include "evoforge/pipeline.hpp"
#include "evoforge/store.hpp"

namespace {

namespace fs = std::filesystem;
using namespace evoforge;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBackend = 2;
constexpr int kExitStore = 3;

struct CliOptions {
    std::string config_path;
    std::string store_override;
    std::string reports_path;
    std::string out_path;
    std::string run_log_override;
    int rounds = 0;
    int budget = -1;
    int depth_override = -1;
    int fusion_override = -1;
    bool diversity = false;
    std::string pca_path;
    std::string embeddings_path;
};

PipelineConfig load_effective_config(const CliOptions& cli) {
    PipelineConfig config = load_config(cli.config_path);
    if (!cli.store_override.empty()) config.store = cli.store_override;
    if (!cli.run_log_override.empty()) config.run_log = cli.run_log_override;
    if (cli.budget >= 0) {
        // Even split: half the attempts to depth, a quarter to each fusion kind.
        if (cli.budget % 4 != 0) {
            throw ValidationError("--budget must be divisible by 4 for the 2:1:1 split");
        }
        config.evolution.m_depth = cli.budget / 2;
        config.evolution.m_fusion = cli.budget / 2;
    }
    if (cli.depth_override >= 0) config.evolution.m_depth = cli.depth_override;
    if (cli.fusion_override >= 0) config.evolution.m_fusion = cli.fusion_override;
    return config;
}

SeedPool load_pool_checked(const PipelineConfig& config) {
    SeedPool pool = load_pool(config.store);
    if (pool.rng_seed() != config.rng_seed) {
        throw ValidationError("store was built with rng_seed " +
                              std::to_string(pool.rng_seed()) + " but config says " +
                              std::to_string(config.rng_seed));
    }
    return pool;
}

int cmd_seed(const CliOptions& cli) {
    PipelineConfig config = load_effective_config(cli);
    if (fs::exists(config.store)) {
        throw ValidationError("store already exists: " + config.store.string() +
                              " (choose another path or remove it)");
    }
    StoreLock lock(config.store);

    GatewayBundle bundle = build_gateway(config);
    SeedPool pool(config.rng_seed);
    SeedStageResult result = run_seed_stage(config, *bundle.gateway, pool);
    save_pool(pool, config.store);

    fs::path reports = cli.reports_path.empty()
                           ? fs::path(config.store.string() + ".clustering.json")
                           : fs::path(cli.reports_path);
    write_clustering_reports(result.reports, reports);

    std::printf("seeded %zu records (%d seeds, %d variants); %d decompose failures, "
                "%d variant shortfalls\n",
                pool.size(), result.seeds, result.variants, result.decompose_failures,
                result.variant_shortfalls);
    std::printf("store: %s\nclustering reports: %s\n", config.store.string().c_str(),
                reports.string().c_str());
    return kExitOk;
}

int cmd_score(const CliOptions& cli) {
    PipelineConfig config = load_effective_config(cli);
    StoreLock lock(config.store);

    GatewayBundle bundle = build_gateway(config);
    SeedPool pool = load_pool_checked(config);
    ScoreStageResult result = run_score_stage(config, *bundle.gateway, pool);
    save_pool(pool, config.store);

    std::printf("responses generated: %d (failures %d), records scored: %d (failures %d)\n",
                result.responses_generated, result.response_failures, result.records_scored,
                result.scoring_failures);
    return kExitOk;
}

int cmd_evolve(const CliOptions& cli) {
    PipelineConfig config = load_effective_config(cli);
    StoreLock lock(config.store);

    GatewayBundle bundle = build_gateway(config);
    SeedPool pool = load_pool_checked(config);
    if (pool.round() >= cli.rounds) {
        std::printf("pool already at round %d (target %d); nothing to do\n", pool.round(),
                    cli.rounds);
        return kExitOk;
    }
    auto reports = run_evolve_stage(config, *bundle.gateway, pool, cli.rounds);
    for (const auto& r : reports) {
        std::printf("round %d: attempted %d, viable %d, parse_failed %d, backend_failed %d\n",
                    r.round, r.attempted, r.viable, r.parse_failed, r.backend_failed);
    }
    std::printf("pool now holds %zu records (%zu viable) at round %d\n", pool.size(),
                pool.viable_count(), pool.round());
    return kExitOk;
}

void write_or_print(const fs::path& out_dir, const std::string& name, const std::string& csv,
                    const std::string& json_text) {
    if (out_dir.empty()) {
        std::printf("# %s\n%s\n", name.c_str(), csv.c_str());
        return;
    }
    fs::create_directories(out_dir);
    std::ofstream csv_file(out_dir / (name + ".csv"), std::ios::binary | std::ios::trunc);
    csv_file << csv;
    std::ofstream json_file(out_dir / (name + ".json"), std::ios::binary | std::ios::trunc);
    json_file << json_text << '\n';
}

int cmd_stats(const CliOptions& cli) {
    PipelineConfig config = load_effective_config(cli);
    SeedPool pool = load_pool_checked(config);
    if (pool.size() == 0) throw ValidationError("pool store holds no records");

    fs::path out_dir = cli.out_path;
    write_or_print(out_dir, "domain", to_csv(domain_distribution(pool)),
                   to_json(domain_distribution(pool)));
    write_or_print(out_dir, "round", to_csv(round_distribution(pool)),
                   to_json(round_distribution(pool)));
    write_or_print(out_dir, "uncertainty", to_csv(uncertainty_summary(pool)),
                   to_json(uncertainty_summary(pool)));

    if (fs::exists(config.run_log)) {
        double rate = success_rate(load_round_reports(config.run_log));
        std::printf("success_rate: %.6f\n", rate);
    }

    if (cli.diversity || !cli.pca_path.empty() || !cli.embeddings_path.empty()) {
        GatewayBundle bundle = build_gateway(config);
        auto viable = pool.viable_records();
        std::vector<std::string> texts;
        for (const auto* rec : viable) texts.push_back(rec->text);
        EmbeddingRequest request;
        request.backend_id = kEmbedderBackendId;
        request.texts = texts;
        EmbeddingResult embedded = bundle.gateway->embed(request);
        if (cli.diversity) {
            DiversityStats stats = diversity_variance(embedded.vectors);
            std::printf("diversity: U=%.9f mu=%.9f over %zu embeddings\n", stats.variance,
                        stats.mean_distance, embedded.vectors.size());
        }
        if (!cli.embeddings_path.empty()) {
            std::ofstream out(cli.embeddings_path, std::ios::binary | std::ios::trunc);
            if (!out) throw StoreError("cannot write " + cli.embeddings_path);
            out << "id";
            for (std::size_t d = 0; d < embedded.vectors.front().size(); ++d) out << ",e" << d;
            out << "\n";
            for (std::size_t i = 0; i < viable.size(); ++i) {
                out << viable[i]->id;
                for (double x : embedded.vectors[i]) out << "," << x;
                out << "\n";
            }
        }
        if (!cli.pca_path.empty()) {
            auto coords = pca_2d(embedded.vectors);
            std::ofstream out(cli.pca_path, std::ios::binary | std::ios::trunc);
            if (!out) throw StoreError("cannot write " + cli.pca_path);
            out << "x,y\n";
            for (const auto& [x, y] : coords) out << x << "," << y << "\n";
        }
    }
    return kExitOk;
}

int cmd_export(const CliOptions& cli) {
    PipelineConfig config = load_effective_config(cli);
    SeedPool pool = load_pool_checked(config);
    std::size_t written = export_pairs(pool, cli.out_path);
    std::printf("exported %zu instruction/response pairs to %s\n", written,
                cli.out_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instruction evolution pipeline: seed, score, evolve, inspect, export"};
    app.require_subcommand(1);

    CliOptions cli;
    app.add_option("-c,--config", cli.config_path, "JSON config file")->required();
    app.add_option("--store", cli.store_override, "Override the pool store path");

    CLI::App* seed = app.add_subcommand("seed", "Ingest corpora, cluster, diversify (round 0)");
    seed->add_option("--reports", cli.reports_path, "Clustering report output path");

    app.add_subcommand("score", "Fill missing responses and uncertainties");

    CLI::App* evolve = app.add_subcommand("evolve", "Run evolution rounds");
    evolve->add_option("--rounds", cli.rounds, "Target round index (absolute)")->required();
    evolve->add_option("--budget", cli.budget,
                       "Attempts per round, split 2:1:1 over depth / in-domain / cross-domain");
    evolve->add_option("--depth", cli.depth_override, "Depth candidates per round");
    evolve->add_option("--fusion", cli.fusion_override, "Fusion pairs per round (even)");

    CLI::App* stats = app.add_subcommand("stats", "Emit metrics tables");
    stats->add_option("--out", cli.out_path, "Directory for CSV/JSON tables (default: stdout)");
    stats->add_option("--run-log", cli.run_log_override, "Run log path override");
    stats->add_flag("--diversity", cli.diversity, "Compute nearest-neighbor distance variance");
    stats->add_option("--embeddings", cli.embeddings_path, "Write the raw embedding matrix CSV");
    stats->add_option("--pca", cli.pca_path, "Write 2-D PCA coordinates CSV");

    CLI::App* exp = app.add_subcommand("export", "Write instruction/response training JSONL");
    exp->add_option("--out", cli.out_path, "Output JSONL path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (seed->parsed()) return cmd_seed(cli);
        if (app.get_subcommand("score")->parsed()) return cmd_score(cli);
        if (evolve->parsed()) return cmd_evolve(cli);
        if (stats->parsed()) return cmd_stats(cli);
        if (exp->parsed()) return cmd_export(cli);
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitValidation;
    } catch (const BackendError& e) {
        std::fprintf(stderr, "backend error: %s\n", e.what());
        return kExitBackend;
    } catch (const StoreError& e) {
        std::fprintf(stderr, "store error: %s\n", e.what());
        return kExitStore;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const PartialPlanError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}
