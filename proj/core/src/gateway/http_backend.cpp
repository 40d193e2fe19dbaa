#include "evoforge/gateway/http_backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

using json = nlohmann::json;

class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(std::string base_url) : base_url_(std::move(base_url)) {}

    HttpResponse post(const std::string& path, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers) override {
        // One client per call keeps this trivially thread-safe.
        httplib::Client client(base_url_);
        client.set_connection_timeout(30, 0);
        client.set_read_timeout(300, 0);
        client.set_write_timeout(30, 0);
        httplib::Headers hl;
        for (const auto& [name, value] : headers) hl.emplace(name, value);
        auto result = client.Post(path, hl, body, "application/json");
        if (!result) {
            throw TransportError("http transport failure: " + httplib::to_string(result.error()));
        }
        return {result->status, result->body};
    }

private:
    std::string base_url_;
};

json parse_wire_json(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const std::exception& e) {
        throw TransportError(std::string("malformed wire response: ") + e.what());
    }
}

}  // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& base_url) {
    return std::make_shared<HttplibTransport>(base_url);
}

HttpBackend::HttpBackend(HttpBackendConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (!transport_) {
        if (config_.base_url.empty()) throw ValidationError("http backend needs a base_url");
        transport_ = make_http_transport(config_.base_url);
    }
}

std::string HttpBackend::post_json(const std::string& path, const std::string& body) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (!config_.api_key.empty()) {
        headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    }
    HttpResponse response = transport_->post(path, body, headers);
    if (response.status < 200 || response.status >= 300) {
        throw TransportError("http status " + std::to_string(response.status) + ": " +
                             response.body.substr(0, 200));
    }
    return response.body;
}

std::string HttpBackend::chat(const ChatRequest& request) {
    json body;
    body["model"] = request.model.empty() ? config_.model : request.model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature < 0.0 ? config_.temperature : request.temperature;
    body["max_tokens"] = request.max_tokens > 0 ? request.max_tokens : config_.max_tokens;
    if (request.seed) body["seed"] = *request.seed;

    json reply = parse_wire_json(post_json("/v1/chat/completions", body.dump()));
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw TransportError(std::string("unexpected chat completion shape: ") + e.what());
    }
}

LogprobResult HttpBackend::logprobs(const LogprobRequest& request) {
    const std::string full = request.instruction + "\n" + request.response;
    // Echoed prompt scoring: the server returns logprobs for every prompt
    // token; response tokens are the ones at or past the response offset.
    const std::size_t response_offset = request.instruction.size() + 1;

    json body;
    body["model"] = request.model.empty() ? config_.model : request.model;
    body["prompt"] = full;
    body["max_tokens"] = 0;
    body["echo"] = true;
    body["logprobs"] = 0;
    body["temperature"] = 0.0;

    json reply = parse_wire_json(post_json("/v1/completions", body.dump()));
    LogprobResult result;
    try {
        const json& lp = reply.at("choices").at(0).at("logprobs");
        const json& token_logprobs = lp.at("token_logprobs");
        const json& offsets = lp.at("text_offset");
        for (std::size_t i = 0; i < token_logprobs.size(); ++i) {
            if (offsets.at(i).get<std::size_t>() < response_offset) continue;
            if (token_logprobs.at(i).is_null()) {
                throw TransportError("null log-probability inside the response span");
            }
            result.token_logprobs.push_back(token_logprobs.at(i).get<double>());
        }
    } catch (const TransportError&) {
        throw;
    } catch (const std::exception& e) {
        throw TransportError(std::string("unexpected logprobs shape: ") + e.what());
    }
    if (result.token_logprobs.empty()) {
        throw TransportError("no tokens fell inside the response span");
    }
    return result;
}

EmbeddingResult HttpBackend::embed(const EmbeddingRequest& request) {
    json body;
    body["model"] = request.model.empty() ? config_.model : request.model;
    body["input"] = request.texts;

    json reply = parse_wire_json(post_json("/v1/embeddings", body.dump()));
    EmbeddingResult result;
    try {
        result.vectors.resize(request.texts.size());
        for (const json& item : reply.at("data")) {
            std::size_t index = item.at("index").get<std::size_t>();
            if (index >= result.vectors.size()) throw TransportError("embedding index out of range");
            result.vectors[index] = item.at("embedding").get<std::vector<double>>();
        }
    } catch (const TransportError&) {
        throw;
    } catch (const std::exception& e) {
        throw TransportError(std::string("unexpected embeddings shape: ") + e.what());
    }
    return result;
}

}  // namespace evoforge
