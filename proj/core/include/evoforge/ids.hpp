#pragma once

#include <cstdint>
#include <string>

#include "evoforge/pool.hpp"

namespace evoforge {

// Content-independent id allocation: run identifier + monotonic counter.
// Two evolver calls returning identical text still get distinct ids.
class IdGenerator {
public:
    IdGenerator(std::string prefix, std::uint64_t next_serial)
        : prefix_(std::move(prefix)), next_(next_serial) {}

    // Prefix derived from the pool's rng seed, counter resumed past the
    // largest serial already in the store. Identically-configured runs
    // allocate identical ids; resumed runs never collide.
    static IdGenerator resume(const SeedPool& pool);

    static std::string run_prefix(std::uint64_t rng_seed);

    std::string next();

private:
    std::string prefix_;
    std::uint64_t next_;
};

}  // namespace evoforge
