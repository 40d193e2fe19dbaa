#include "evoforge/gateway/cache.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "evoforge/errors.hpp"

namespace evoforge {

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path ReplayCache::entry_path(const std::string& key) const {
    return dir_ / (key + ".json");
}

std::optional<std::string> ReplayCache::lookup(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ifstream in(entry_path(key), std::ios::binary);
    if (!in) return std::nullopt;
    try {
        nlohmann::json j = nlohmann::json::parse(in);
        BackendExchange exchange;
        exchange.cache_key = j.at("cache_key").get<std::string>();
        exchange.payload = j.at("payload").get<std::string>();
        exchange.timestamp = j.at("timestamp").get<std::int64_t>();
        exchange.attempts = j.at("attempts").get<int>();
        return exchange.payload;
    } catch (const std::exception& e) {
        throw StoreError("corrupt cache entry " + entry_path(key).string() + ": " + e.what());
    }
}

void ReplayCache::store(const std::string& key, const std::string& payload, int attempts) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto path = entry_path(key);
    if (std::filesystem::exists(path)) return;  // identical key => identical payload

    BackendExchange exchange;
    exchange.cache_key = key;
    exchange.payload = payload;
    exchange.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
    exchange.attempts = attempts;

    nlohmann::json j;
    j["cache_key"] = exchange.cache_key;
    j["payload"] = exchange.payload;
    j["timestamp"] = exchange.timestamp;
    j["attempts"] = exchange.attempts;

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError("cannot write cache entry " + tmp.string());
        out << j.dump();
    }
    std::filesystem::rename(tmp, path);
}

std::string ReplayCache::sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0F]);
    }
    return out;
}

}  // namespace evoforge
