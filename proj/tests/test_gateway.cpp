#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "evoforge/errors.hpp"
#include "evoforge/gateway/gateway.hpp"
#include "evoforge/gateway/http_backend.hpp"
#include "evoforge/gateway/mock_backend.hpp"

using namespace evoforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("evoforge_gw_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

GatewayOptions fast_options() {
    GatewayOptions options;
    options.retry.initial_backoff = std::chrono::milliseconds(0);
    return options;
}

std::shared_ptr<MockBackend> echo_backend() {
    auto backend = std::make_shared<MockBackend>();
    backend->set_chat([](const ChatRequest& r) {
        return r.prompt == "ping" ? std::string("ok") : "echo:" + r.prompt;
    });
    return backend;
}

}  // namespace

TEST_CASE("mock backend with a canned map answers the canned reply") {
    Gateway gateway(fast_options());
    gateway.add_backend("chat", echo_backend());
    ChatRequest request;
    request.backend_id = "chat";
    request.prompt = "ping";
    CHECK(gateway.chat(request) == "ok");
}

TEST_CASE("second identical call is served from cache without network") {
    auto dir = temp_dir("cache");
    GatewayOptions options = fast_options();
    options.cache_dir = dir;
    Gateway gateway(options);
    auto backend = echo_backend();
    gateway.add_backend("chat", backend);

    ChatRequest request;
    request.backend_id = "chat";
    request.prompt = "ping";
    CHECK(gateway.chat(request) == "ok");
    CHECK(gateway.network_calls() == 1);
    CHECK(gateway.chat(request) == "ok");
    CHECK(gateway.network_calls() == 1);
    CHECK(gateway.cache_hits() == 1);
    CHECK(backend->chat_calls() == 1);
}

TEST_CASE("an always-failing backend errors after exactly the retry budget") {
    Gateway gateway(fast_options());  // max_attempts defaults to 3
    auto backend = std::make_shared<MockBackend>();
    backend->set_chat([](const ChatRequest&) -> std::string {
        throw TransportError("synthetic outage");
    });
    gateway.add_backend("chat", backend);

    ChatRequest request;
    request.backend_id = "chat";
    request.prompt = "ping";
    try {
        gateway.chat(request);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.attempts == 3);
    }
    CHECK(backend->chat_calls() == 3);
}

TEST_CASE("shrinking backoff schedules are rejected") {
    GatewayOptions options;
    options.retry.backoff_multiplier = 0.5;
    CHECK_THROWS_AS(Gateway{options}, ValidationError);
}

TEST_CASE("missing capability raises CapabilityError, not a retry loop") {
    Gateway gateway(fast_options());
    auto backend = std::make_shared<MockBackend>();  // no handlers at all
    gateway.add_backend("score", backend);

    LogprobRequest request;
    request.backend_id = "score";
    request.instruction = "a b";
    request.response = "c";
    CHECK_THROWS_AS(gateway.score_logprobs(request), CapabilityError);
}

TEST_CASE("empty response is a precondition error") {
    Gateway gateway(fast_options());
    gateway.add_backend("score", echo_backend());
    LogprobRequest request;
    request.backend_id = "score";
    request.instruction = "a";
    request.response = "";
    CHECK_THROWS_AS(gateway.score_logprobs(request), ValidationError);
}

TEST_CASE("identical logprob requests replay identically via cache") {
    auto dir = temp_dir("lpcache");
    GatewayOptions options = fast_options();
    options.cache_dir = dir;
    Gateway gateway(options);
    auto backend = std::make_shared<MockBackend>();
    backend->set_logprobs([](const LogprobRequest&) {
        return std::vector<double>{-0.1, -0.2};
    });
    gateway.add_backend("score", backend);

    LogprobRequest request;
    request.backend_id = "score";
    request.instruction = "what is two plus two";
    request.response = "four";
    auto first = gateway.score_logprobs(request);
    auto second = gateway.score_logprobs(request);
    CHECK(first.token_logprobs == second.token_logprobs);
    CHECK(backend->logprob_calls() == 1);
}

TEST_CASE("embeddings come back unit-norm and deterministic") {
    Gateway gateway(fast_options());
    auto simulator = std::make_shared<ScriptedSimulator>();
    gateway.add_backend("embed", make_scripted_backend(simulator));

    EmbeddingRequest request;
    request.backend_id = "embed";
    request.texts = {"alpha", "beta", "alpha"};
    EmbeddingResult result = gateway.embed(request);
    REQUIRE(result.vectors.size() == 3);
    CHECK(result.vectors[0] == result.vectors[2]);
    for (const auto& v : result.vectors) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        CHECK(std::fabs(std::sqrt(norm) - 1.0) < 1e-9);
    }
}

TEST_CASE("a batch with mismatched dimensions is an error") {
    Gateway gateway(fast_options());
    auto backend = std::make_shared<MockBackend>();
    backend->set_embeddings([](const EmbeddingRequest&) {
        return std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, 0.0, 0.0}};
    });
    gateway.add_backend("embed", backend);

    EmbeddingRequest request;
    request.backend_id = "embed";
    request.texts = {"a", "b"};
    CHECK_THROWS_AS(gateway.embed(request), BackendError);
}

TEST_CASE("http backend speaks the chat wire format end to end") {
    auto simulator = std::make_shared<ScriptedSimulator>();
    auto transport = std::make_shared<SimulatorTransport>(simulator);
    HttpBackendConfig config;
    config.model = "test-model";
    HttpBackend backend(config, transport);

    ChatRequest request;
    request.backend_id = "chat";
    request.prompt = "Describe a fast sorting algorithm in one sentence.";
    std::string reply = backend.chat(request);
    CHECK(reply == simulator->chat_reply(request.prompt));
    CHECK(transport->calls() == 1);
}

TEST_CASE("http backend extracts exactly the response-span logprobs") {
    auto simulator = std::make_shared<ScriptedSimulator>();
    auto transport = std::make_shared<SimulatorTransport>(simulator);
    HttpBackendConfig config;
    HttpBackend backend(config, transport);

    LogprobRequest request;
    request.instruction = "what is two plus two";
    request.response = "the answer is four";
    LogprobResult result = backend.logprobs(request);
    CHECK(result.token_count() == 4);  // whitespace tokens of the response
    for (double lp : result.token_logprobs) CHECK(lp <= 0.0);
}

TEST_CASE("http backend parses the embeddings wire format") {
    auto simulator = std::make_shared<ScriptedSimulator>();
    auto transport = std::make_shared<SimulatorTransport>(simulator);
    HttpBackendConfig config;
    HttpBackend backend(config, transport);

    EmbeddingRequest request;
    request.texts = {"one", "two"};
    EmbeddingResult result = backend.embed(request);
    REQUIRE(result.vectors.size() == 2);
    CHECK(result.vectors[0].size() == 8);
}

TEST_CASE("http status errors surface as transport failures and consume retries") {
    class FailingTransport : public Transport {
    public:
        HttpResponse post(const std::string&, const std::string&,
                          const std::vector<std::pair<std::string, std::string>>&) override {
            ++calls;
            return {500, "overloaded"};
        }
        int calls = 0;
    };

    auto transport = std::make_shared<FailingTransport>();
    HttpBackendConfig config;
    Gateway gateway(fast_options());
    gateway.add_backend("chat", std::make_shared<HttpBackend>(config, transport));

    ChatRequest request;
    request.backend_id = "chat";
    request.prompt = "hello";
    CHECK_THROWS_AS(gateway.chat(request), BackendError);
    CHECK(transport->calls == 3);
}
