#include "evoforge/pool.hpp"

#include <algorithm>
#include <charconv>

#include "evoforge/errors.hpp"

namespace evoforge {

void SeedPool::insert(InstructionRecord record) {
    record.validate();
    if (index_.count(record.id)) {
        throw ValidationError("duplicate record id: " + record.id);
    }
    for (const auto& parent : record.parents) {
        if (!index_.count(parent)) {
            throw ValidationError("record " + record.id + " references unknown parent " + parent);
        }
    }
    if (record.viable()) {
        domain_counts_[record.root_domain] += 1;
    }
    index_.emplace(record.id, records_.size());
    records_.push_back(std::move(record));
}

const InstructionRecord& SeedPool::at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown record id: " + id);
    return records_[it->second];
}

InstructionRecord& SeedPool::mutable_at(const std::string& id) {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown record id: " + id);
    return records_[it->second];
}

std::vector<const InstructionRecord*> SeedPool::viable_records() const {
    std::vector<const InstructionRecord*> out;
    out.reserve(records_.size());
    for (const auto& r : records_) {
        if (r.viable()) out.push_back(&r);
    }
    return out;
}

std::size_t SeedPool::viable_count() const {
    std::size_t n = 0;
    for (const auto& [domain, count] : domain_counts_) n += static_cast<std::size_t>(count);
    return n;
}

int SeedPool::domain_count(RootDomain d) const {
    auto it = domain_counts_.find(d);
    return it == domain_counts_.end() ? 0 : it->second;
}

void SeedPool::set_status(const std::string& id, RecordStatus status) {
    auto& rec = mutable_at(id);
    if (rec.status == status) return;
    if (rec.viable()) domain_counts_[rec.root_domain] -= 1;
    rec.status = status;
    if (rec.viable()) domain_counts_[rec.root_domain] += 1;
}

void SeedPool::set_response(const std::string& id, std::string response) {
    mutable_at(id).response = std::move(response);
}

void SeedPool::set_uncertainty(const std::string& id, double u) {
    if (u < 0.0) throw ValidationError("uncertainty must be non-negative");
    mutable_at(id).uncertainty = u;
}

void SeedPool::set_elements(const std::string& id, DecomposedElements elements) {
    if (elements.objectives.empty()) {
        throw ValidationError("record " + id + ": cannot set elements with empty objectives");
    }
    auto& rec = mutable_at(id);
    rec.objective_count = static_cast<int>(elements.objectives.size());
    rec.elements = std::move(elements);
}

void SeedPool::increment_fusion_use(const std::string& id) {
    mutable_at(id).fusion_use_count += 1;
}

bool SeedPool::counts_consistent() const {
    std::map<RootDomain, int> recount;
    for (const auto& r : records_) {
        if (r.viable()) recount[r.root_domain] += 1;
    }
    // Stored map may carry zero entries after status flips; compare effective counts.
    for (const auto& [domain, count] : domain_counts_) {
        if (count != (recount.count(domain) ? recount.at(domain) : 0)) return false;
    }
    for (const auto& [domain, count] : recount) {
        if (count != domain_count(domain)) return false;
    }
    return true;
}

std::uint64_t SeedPool::max_id_serial(const std::string& prefix) const {
    std::uint64_t max_serial = 0;
    for (const auto& r : records_) {
        if (r.id.rfind(prefix, 0) != 0) continue;
        std::uint64_t serial = 0;
        const char* first = r.id.data() + prefix.size();
        const char* last = r.id.data() + r.id.size();
        auto [ptr, ec] = std::from_chars(first, last, serial);
        if (ec == std::errc() && ptr == last) max_serial = std::max(max_serial, serial);
    }
    return max_serial;
}

}  // namespace evoforge
