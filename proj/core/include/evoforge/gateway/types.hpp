#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace evoforge {

// temperature < 0 and max_tokens == 0 mean "use the backend's default".
struct ChatRequest {
    std::string backend_id;
    std::string model;
    std::string prompt;
    double temperature = -1.0;
    int max_tokens = 0;
    std::optional<std::uint64_t> seed;
};

struct LogprobRequest {
    std::string backend_id;
    std::string model;
    std::string instruction;
    std::string response;
};

// Per-token log-probabilities of exactly the response tokens.
struct LogprobResult {
    std::vector<double> token_logprobs;
    std::size_t token_count() const { return token_logprobs.size(); }
};

struct EmbeddingRequest {
    std::string backend_id;
    std::string model;
    std::vector<std::string> texts;
};

struct EmbeddingResult {
    std::vector<std::vector<double>> vectors;  // unit norm, one per input text
};

}  // namespace evoforge
