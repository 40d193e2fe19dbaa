#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>

#include "evoforge/gateway/backend.hpp"
#include "evoforge/gateway/http_backend.hpp"

namespace evoforge {

// Programmable backend for tests: each capability is a std::function; an
// unset capability raises CapabilityError. Call counters observe caching
// and retry behavior.
class MockBackend : public Backend {
public:
    using ChatFn = std::function<std::string(const ChatRequest&)>;
    using LogprobFn = std::function<std::vector<double>(const LogprobRequest&)>;
    using EmbedFn = std::function<std::vector<std::vector<double>>(const EmbeddingRequest&)>;

    MockBackend() = default;

    void set_chat(ChatFn fn) { chat_fn_ = std::move(fn); }
    void set_logprobs(LogprobFn fn) { logprob_fn_ = std::move(fn); }
    void set_embeddings(EmbedFn fn) { embed_fn_ = std::move(fn); }

    BackendCapabilities capabilities() const override;
    std::string chat(const ChatRequest& request) override;
    LogprobResult logprobs(const LogprobRequest& request) override;
    EmbeddingResult embed(const EmbeddingRequest& request) override;

    std::uint64_t chat_calls() const { return chat_calls_; }
    std::uint64_t logprob_calls() const { return logprob_calls_; }
    std::uint64_t embed_calls() const { return embed_calls_; }

private:
    ChatFn chat_fn_;
    LogprobFn logprob_fn_;
    EmbedFn embed_fn_;
    std::atomic<std::uint64_t> chat_calls_{0};
    std::atomic<std::uint64_t> logprob_calls_{0};
    std::atomic<std::uint64_t> embed_calls_{0};
};

struct SimulatorOptions {
    int new_prompts_per_reply = 10;  // the diversification template asks for ten
    int poison_every_fusion = 0;     // k > 0: every k-th fusion reply is malformed
};

// Deterministic evolver/scorer/embedder stand-in. Recognizes which pipeline
// template a prompt came from and produces a grammatically valid reply
// derived only from the prompt text, so identical runs stay byte-identical.
// The only state is the fusion-call counter driving reply poisoning.
class ScriptedSimulator {
public:
    explicit ScriptedSimulator(SimulatorOptions options = {});

    std::string chat_reply(const std::string& prompt);
    std::vector<double> response_logprobs(const std::string& instruction,
                                          const std::string& response);
    std::vector<std::vector<double>> embeddings(const std::vector<std::string>& texts);

    std::uint64_t fusion_calls() const { return fusion_calls_; }

private:
    std::string decomposition_reply(const std::string& prompt) const;
    std::string diversification_reply(const std::string& prompt) const;
    std::string depth_reply(const std::string& prompt) const;
    std::string fusion_reply(const std::string& prompt);
    std::string freeform_reply(const std::string& prompt) const;

    SimulatorOptions options_;
    std::mutex mutex_;
    std::uint64_t fusion_calls_ = 0;
};

// MockBackend wired to a simulator (all three capabilities).
std::shared_ptr<MockBackend> make_scripted_backend(std::shared_ptr<ScriptedSimulator> simulator);

// OpenAI-compatible wire endpoint over a simulator, for exercising the full
// HttpBackend serialization path without a network. Counts posts.
class SimulatorTransport : public Transport {
public:
    explicit SimulatorTransport(std::shared_ptr<ScriptedSimulator> simulator)
        : simulator_(std::move(simulator)) {}

    HttpResponse post(const std::string& path, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers) override;

    std::uint64_t calls() const { return calls_; }

private:
    std::shared_ptr<ScriptedSimulator> simulator_;
    std::atomic<std::uint64_t> calls_{0};
};

}  // namespace evoforge
