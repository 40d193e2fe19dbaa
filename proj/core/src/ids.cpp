#include "evoforge/ids.hpp"

#include <cstdio>

namespace evoforge {

std::string IdGenerator::run_prefix(std::uint64_t rng_seed) {
    return "r" + std::to_string(rng_seed) + "-";
}

IdGenerator IdGenerator::resume(const SeedPool& pool) {
    std::string prefix = run_prefix(pool.rng_seed());
    return IdGenerator(prefix, pool.max_id_serial(prefix) + 1);
}

std::string IdGenerator::next() {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(next_++));
    return prefix_ + buf;
}

}  // namespace evoforge
