#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "evoforge/record.hpp"

namespace evoforge {

// The evolving instruction set C^t. Insertion-ordered so that serialization
// and weight vectors are deterministic. Single writer; concurrent reads are
// safe between mutations.
class SeedPool {
public:
    SeedPool() = default;
    explicit SeedPool(std::uint64_t rng_seed) : rng_seed_(rng_seed) {}

    // Rejects duplicate ids and unresolved parents; counts the record in
    // domain_counts iff it is viable. Throws ValidationError, pool unchanged.
    void insert(InstructionRecord record);

    bool contains(const std::string& id) const { return index_.count(id) != 0; }
    const InstructionRecord& at(const std::string& id) const;
    std::span<const InstructionRecord> records() const { return records_; }

    // Viable records in insertion order.
    std::vector<const InstructionRecord*> viable_records() const;
    std::size_t size() const { return records_.size(); }
    std::size_t viable_count() const;
    int domain_count(RootDomain d) const;
    const std::map<RootDomain, int>& domain_counts() const { return domain_counts_; }

    int round() const { return round_; }
    void set_round(int round) { round_ = round; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    void set_rng_seed(std::uint64_t seed) { rng_seed_ = seed; }

    // Field mutators that keep domain_counts consistent.
    void set_status(const std::string& id, RecordStatus status);
    void set_response(const std::string& id, std::string response);
    void set_uncertainty(const std::string& id, double u);
    void set_elements(const std::string& id, DecomposedElements elements);
    void increment_fusion_use(const std::string& id);

    // domain_counts == brute-force recount over viable records.
    bool counts_consistent() const;

    // Largest numeric suffix among ids starting with `prefix` (0 if none).
    std::uint64_t max_id_serial(const std::string& prefix) const;

private:
    InstructionRecord& mutable_at(const std::string& id);

    std::vector<InstructionRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<RootDomain, int> domain_counts_;
    int round_ = 0;
    std::uint64_t rng_seed_ = 0;
};

}  // namespace evoforge
