#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "evoforge/gateway/backend.hpp"
#include "evoforge/gateway/cache.hpp"

namespace evoforge {

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{250};
    double backoff_multiplier = 2.0;  // delays monotonically non-decreasing
};

struct GatewayOptions {
    RetryPolicy retry;
    int max_in_flight = 8;
    std::chrono::milliseconds min_backend_interval{0};  // per-backend rate limit
    std::optional<std::filesystem::path> cache_dir;
};

// Front door for every model interaction: routes requests to configured
// backends, retries transport failures with backoff, rate-limits per
// backend, bounds in-flight requests, and replays cached exchanges without
// touching the backend. Safe for concurrent calls.
class Gateway {
public:
    explicit Gateway(GatewayOptions options = {});

    void add_backend(const std::string& id, std::shared_ptr<Backend> backend);
    bool has_backend(const std::string& id) const;

    std::string chat(const ChatRequest& request);
    LogprobResult score_logprobs(const LogprobRequest& request);
    EmbeddingResult embed(const EmbeddingRequest& request);

    // Backend invocations actually performed (cache misses, including retries).
    std::uint64_t network_calls() const { return network_calls_; }
    std::uint64_t cache_hits() const { return cache_hits_; }

private:
    class InFlightSlot;
    Backend& backend_for(const std::string& id) const;
    std::string cached_call(const std::string& backend_id, const std::string& canonical_request,
                            const std::function<std::string()>& invoke);
    void rate_limit(const std::string& backend_id);

    GatewayOptions options_;
    std::map<std::string, std::shared_ptr<Backend>> backends_;
    std::unique_ptr<ReplayCache> cache_;

    mutable std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    int in_flight_ = 0;

    std::mutex rate_mutex_;
    std::map<std::string, std::chrono::steady_clock::time_point> last_call_;

    std::atomic<std::uint64_t> network_calls_{0};
    std::atomic<std::uint64_t> cache_hits_{0};
};

}  // namespace evoforge
