#include "evoforge/gateway/gateway.hpp"

#include <cmath>
#include <thread>

#include <json.hpp>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json canonical_base(const char* kind, const std::string& backend_id,
                            const std::string& model) {
    ordered_json j;
    j["kind"] = kind;
    j["backend_id"] = backend_id;
    j["model"] = model;
    return j;
}

}  // namespace

// RAII guard for the bounded in-flight request count.
class Gateway::InFlightSlot {
public:
    explicit InFlightSlot(Gateway& gw) : gw_(gw) {
        std::unique_lock<std::mutex> lock(gw_.slots_mutex_);
        gw_.slots_cv_.wait(lock, [&] { return gw_.in_flight_ < gw_.options_.max_in_flight; });
        ++gw_.in_flight_;
    }
    ~InFlightSlot() {
        {
            std::lock_guard<std::mutex> lock(gw_.slots_mutex_);
            --gw_.in_flight_;
        }
        gw_.slots_cv_.notify_one();
    }

private:
    Gateway& gw_;
};

Gateway::Gateway(GatewayOptions options) : options_(std::move(options)) {
    if (options_.max_in_flight < 1) throw ValidationError("max_in_flight must be >= 1");
    if (options_.retry.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
    if (options_.retry.backoff_multiplier < 1.0) {
        throw ValidationError("backoff_multiplier must be >= 1 (delays never shrink)");
    }
    if (options_.cache_dir) cache_ = std::make_unique<ReplayCache>(*options_.cache_dir);
}

void Gateway::add_backend(const std::string& id, std::shared_ptr<Backend> backend) {
    if (!backend) throw ValidationError("null backend: " + id);
    backends_[id] = std::move(backend);
}

bool Gateway::has_backend(const std::string& id) const { return backends_.count(id) != 0; }

Backend& Gateway::backend_for(const std::string& id) const {
    auto it = backends_.find(id);
    if (it == backends_.end()) throw ValidationError("backend not configured: " + id);
    return *it->second;
}

void Gateway::rate_limit(const std::string& backend_id) {
    if (options_.min_backend_interval.count() <= 0) return;
    std::chrono::steady_clock::time_point wake;
    {
        std::lock_guard<std::mutex> lock(rate_mutex_);
        auto now = std::chrono::steady_clock::now();
        auto it = last_call_.find(backend_id);
        wake = (it == last_call_.end()) ? now
                                        : std::max(now, it->second + options_.min_backend_interval);
        last_call_[backend_id] = wake;
    }
    std::this_thread::sleep_until(wake);
}

std::string Gateway::cached_call(const std::string& backend_id,
                                 const std::string& canonical_request,
                                 const std::function<std::string()>& invoke) {
    std::string key = ReplayCache::sha256_hex(canonical_request);
    if (cache_) {
        if (auto hit = cache_->lookup(key)) {
            ++cache_hits_;
            return *hit;
        }
    }

    InFlightSlot slot(*this);
    std::string last_error;
    auto delay = options_.retry.initial_backoff;
    for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
        try {
            rate_limit(backend_id);
            ++network_calls_;
            std::string payload = invoke();
            if (cache_) cache_->store(key, payload, attempt);
            return payload;
        } catch (const TransportError& e) {
            last_error = e.what();
            if (attempt == options_.retry.max_attempts) break;
            if (delay.count() > 0) std::this_thread::sleep_for(delay);
            delay = std::chrono::milliseconds(static_cast<long long>(
                std::ceil(static_cast<double>(delay.count()) * options_.retry.backoff_multiplier)));
        }
    }
    throw BackendError(backend_id + ": " + last_error, options_.retry.max_attempts);
}

std::string Gateway::chat(const ChatRequest& request) {
    if (request.prompt.empty()) throw ValidationError("chat prompt must be non-empty");
    if (request.temperature < 0.0 && request.temperature != -1.0) {
        throw ValidationError("temperature must be >= 0");
    }
    Backend& backend = backend_for(request.backend_id);
    if (!backend.capabilities().chat) {
        throw CapabilityError("backend " + request.backend_id + " does not support chat");
    }

    ordered_json canon = canonical_base("chat", request.backend_id, request.model);
    canon["prompt"] = request.prompt;
    canon["temperature"] = request.temperature;
    canon["max_tokens"] = request.max_tokens;
    canon["seed"] = request.seed ? ordered_json(*request.seed) : ordered_json(nullptr);

    std::string payload = cached_call(request.backend_id, canon.dump(), [&] {
        ordered_json p;
        p["text"] = backend.chat(request);
        return p.dump();
    });
    return ordered_json::parse(payload).at("text").get<std::string>();
}

LogprobResult Gateway::score_logprobs(const LogprobRequest& request) {
    if (request.response.empty()) throw ValidationError("logprob response must be non-empty");
    if (request.instruction.empty()) throw ValidationError("logprob instruction must be non-empty");
    Backend& backend = backend_for(request.backend_id);
    if (!backend.capabilities().logprobs) {
        throw CapabilityError("backend " + request.backend_id +
                              " does not support log-probability scoring");
    }

    ordered_json canon = canonical_base("logprobs", request.backend_id, request.model);
    canon["instruction"] = request.instruction;
    canon["response"] = request.response;

    std::string payload = cached_call(request.backend_id, canon.dump(), [&] {
        LogprobResult result = backend.logprobs(request);
        if (result.token_logprobs.empty()) {
            throw TransportError("backend returned no response tokens");
        }
        ordered_json p;
        p["token_logprobs"] = result.token_logprobs;
        return p.dump();
    });

    ordered_json parsed = ordered_json::parse(payload);
    LogprobResult result;
    for (double lp : parsed.at("token_logprobs")) {
        result.token_logprobs.push_back(std::min(lp, 0.0));
    }
    return result;
}

EmbeddingResult Gateway::embed(const EmbeddingRequest& request) {
    if (request.texts.empty()) throw ValidationError("embedding request must carry texts");
    Backend& backend = backend_for(request.backend_id);
    if (!backend.capabilities().embeddings) {
        throw CapabilityError("backend " + request.backend_id + " does not support embeddings");
    }

    ordered_json canon = canonical_base("embeddings", request.backend_id, request.model);
    canon["texts"] = request.texts;

    std::string payload = cached_call(request.backend_id, canon.dump(), [&] {
        EmbeddingResult raw = backend.embed(request);
        if (raw.vectors.size() != request.texts.size()) {
            throw TransportError("embedding count mismatch: got " +
                                 std::to_string(raw.vectors.size()) + " for " +
                                 std::to_string(request.texts.size()) + " texts");
        }
        for (const auto& v : raw.vectors) {
            if (v.size() != raw.vectors.front().size()) {
                throw TransportError("embedding dimension mismatch across batch");
            }
        }
        ordered_json p;
        p["vectors"] = raw.vectors;
        return p.dump();
    });

    ordered_json parsed = ordered_json::parse(payload);
    EmbeddingResult result;
    for (const auto& vec : parsed.at("vectors")) {
        std::vector<double> v = vec.get<std::vector<double>>();
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq <= 0.0) throw BackendError(request.backend_id + ": zero-norm embedding", 1);
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
        result.vectors.push_back(std::move(v));
    }
    return result;
}

}  // namespace evoforge
