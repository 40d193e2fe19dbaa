#pragma once

#include "evoforge/gateway/types.hpp"

namespace evoforge {

struct BackendCapabilities {
    bool chat = false;
    bool logprobs = false;
    bool embeddings = false;
};

// One configured model endpoint. Implementations throw TransportError for
// retryable failures and CapabilityError for unsupported operations; the
// gateway owns retries, caching and concurrency limits.
class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendCapabilities capabilities() const = 0;
    virtual std::string chat(const ChatRequest& request) = 0;
    virtual LogprobResult logprobs(const LogprobRequest& request) = 0;
    virtual EmbeddingResult embed(const EmbeddingRequest& request) = 0;
};

}  // namespace evoforge
