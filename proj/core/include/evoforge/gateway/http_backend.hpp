#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "evoforge/gateway/backend.hpp"

namespace evoforge {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Wire layer under HttpBackend. Injectable so tests can run the full
// request/response serialization path without a network.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& path, const std::string& body,
                              const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

// Real HTTP(S) transport (cpp-httplib). base_url is scheme://host[:port],
// without the /v1 suffix.
std::shared_ptr<Transport> make_http_transport(const std::string& base_url);

struct HttpBackendConfig {
    std::string base_url;
    std::string model;
    std::string api_key;        // sent as a Bearer token when non-empty
    double temperature = 0.7;   // used when the request leaves it unset
    int max_tokens = 1024;
};

// OpenAI-compatible backend: chat completions, embeddings, and
// log-probability scoring through the completions echo/logprobs convention.
// For scoring, the prompt is instruction + "\n" + response and the response
// tokens are selected by text offset.
class HttpBackend : public Backend {
public:
    HttpBackend(HttpBackendConfig config, std::shared_ptr<Transport> transport = nullptr);

    BackendCapabilities capabilities() const override { return {true, true, true}; }
    std::string chat(const ChatRequest& request) override;
    LogprobResult logprobs(const LogprobRequest& request) override;
    EmbeddingResult embed(const EmbeddingRequest& request) override;

private:
    std::string post_json(const std::string& path, const std::string& body);

    HttpBackendConfig config_;
    std::shared_ptr<Transport> transport_;
};

}  // namespace evoforge
