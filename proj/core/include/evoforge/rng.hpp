#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace evoforge {

using Rng = std::mt19937_64;

// Deterministic sub-stream derivation: one master seed, one label per use site.
// Keeps independent pipeline stages reproducible regardless of execution order.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words;
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto v : stream) push(v);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

// FNV-1a; stable across platforms (std::hash is not).
inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// RNG stream labels, one per draw site.
namespace rng_stream {
inline constexpr std::uint64_t kClustering = 1;
inline constexpr std::uint64_t kRepresentatives = 2;
inline constexpr std::uint64_t kPerturbation = 3;
inline constexpr std::uint64_t kRound = 4;
}  // namespace rng_stream

}  // namespace evoforge
