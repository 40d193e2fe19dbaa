#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace evoforge {

// A cached, replayable exchange against a backend. The key hashes only the
// canonicalized request (backend id, kind, payload); timestamps and attempt
// counts are recorded but never hashed, so replays are stable across runs.
struct BackendExchange {
    std::string cache_key;
    std::string payload;  // canonical result JSON
    std::int64_t timestamp = 0;
    int attempts = 0;
};

// Content-addressed on-disk replay cache, one file per exchange.
// Writes are serialized; the first write for a key wins.
class ReplayCache {
public:
    explicit ReplayCache(std::filesystem::path dir);

    std::optional<std::string> lookup(const std::string& key) const;
    void store(const std::string& key, const std::string& payload, int attempts);

    const std::filesystem::path& dir() const { return dir_; }

    static std::string sha256_hex(std::string_view data);

private:
    std::filesystem::path entry_path(const std::string& key) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

}  // namespace evoforge
