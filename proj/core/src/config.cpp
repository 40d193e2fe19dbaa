#include "evoforge/config.hpp"

#include <fstream>

#include <json.hpp>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

using json = nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

BackendConfig parse_backend(const json& j) {
    BackendConfig cfg;
    cfg.type = j.value("type", std::string("mock"));
    if (cfg.type != "mock" && cfg.type != "openai") {
        throw ValidationError("backend type must be \"mock\" or \"openai\": " + cfg.type);
    }
    cfg.base_url = j.value("base_url", std::string());
    cfg.model = j.value("model", std::string());
    cfg.api_key_env = j.value("api_key_env", std::string());
    cfg.temperature = j.value("temperature", -1.0);
    cfg.max_tokens = j.value("max_tokens", 1024);
    if (cfg.type == "openai" && cfg.base_url.empty()) {
        throw ValidationError("openai backend needs a base_url");
    }
    return cfg;
}

PipelineConfig parse_config(const json& j, const std::filesystem::path& base) {
    PipelineConfig cfg;

    if (!j.contains("rng_seed")) {
        throw ValidationError("config must set rng_seed: reproducibility is not optional");
    }
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();

    cfg.store = resolve(base, j.value("store", std::string("pool.jsonl")));
    cfg.run_log = resolve(base, j.value("run_log", std::string("run_log.jsonl")));
    if (j.contains("cache_dir")) {
        cfg.cache_dir = resolve(base, j.at("cache_dir").get<std::string>());
    }
    cfg.workers = j.value("workers", 1);
    if (cfg.workers < 1) throw ValidationError("workers must be >= 1");

    if (j.contains("backends")) {
        for (const auto& [role, spec] : j.at("backends").items()) {
            cfg.backends[role] = parse_backend(spec);
        }
    }

    if (j.contains("seeding")) {
        const json& s = j.at("seeding");
        for (const auto& src : s.value("sources", json::array())) {
            SourceConfig source;
            source.path = resolve(base, src.at("path").get<std::string>());
            if (!src.contains("domain")) {
                throw ValidationError("corpus source " + source.path.string() +
                                      " needs a domain mapping");
            }
            source.domain = root_domain_from_string(src.at("domain").get<std::string>());
            source.text_field = src.value("text_field", std::string("instruction"));
            cfg.seeding.sources.push_back(std::move(source));
        }
        cfg.seeding.k_range.min_k = s.value("k_min", 1);
        cfg.seeding.k_range.max_k = s.value("k_max", 8);
        cfg.seeding.k_range.validate();
        cfg.seeding.variants_per_seed = s.value("variants_per_seed", 3);
        if (cfg.seeding.variants_per_seed < 0) {
            throw ValidationError("variants_per_seed must be >= 0");
        }
        cfg.seeding.kmeans.restarts = s.value("kmeans_restarts", 4);
        cfg.seeding.kmeans.max_iterations = s.value("kmeans_max_iterations", 100);
    }

    if (j.contains("scoring")) {
        const json& s = j.at("scoring");
        cfg.scoring.n_perturbations = s.value("n_perturbations", 5);
        cfg.scoring.drop_fraction = s.value("drop_fraction", 0.2);
    }
    cfg.scoring.rng_seed = cfg.rng_seed;
    cfg.scoring.validate();

    if (j.contains("evolution")) {
        const json& e = j.at("evolution");
        cfg.evolution.m_depth = e.value("m_depth", 8);
        cfg.evolution.m_fusion = e.value("m_fusion", 8);
        cfg.evolution.epsilon_u = e.value("epsilon_u", 1e-6);
    }

    if (j.contains("gateway")) {
        const json& g = j.at("gateway");
        cfg.gateway.max_attempts = g.value("max_attempts", 3);
        cfg.gateway.backoff_ms = g.value("backoff_ms", 250);
        cfg.gateway.max_in_flight = g.value("max_in_flight", 8);
        cfg.gateway.min_backend_interval_ms = g.value("min_backend_interval_ms", 0);
    }

    if (j.contains("mock")) {
        const json& m = j.at("mock");
        cfg.mock.new_prompts_per_reply = m.value("new_prompts_per_reply", 10);
        cfg.mock.poison_every_fusion = m.value("poison_every_fusion", 0);
    }

    return cfg;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file: " + path.string());

    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
    }

    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");
    try {
        return parse_config(j, base);
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
}

}  // namespace evoforge
