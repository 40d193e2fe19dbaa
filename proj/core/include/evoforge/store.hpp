#pragma once

#include <filesystem>

#include "evoforge/pool.hpp"

namespace evoforge {

inline constexpr int kStoreSchemaVersion = 1;

// JSONL pool store. First line is a metadata object
// {"round":..,"rng_seed":..,"schema_version":..}; every following line is one
// record with the schema's exact field names, absent optionals as null.
// save_pool writes to a temp file and renames, so a crash never leaves a
// partially written store behind.
void save_pool(const SeedPool& pool, const std::filesystem::path& path);

// Throws StoreError naming the offending line on any malformed input.
SeedPool load_pool(const std::filesystem::path& path);

}  // namespace evoforge
