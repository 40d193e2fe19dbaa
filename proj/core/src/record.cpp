#include "evoforge/record.hpp"

#include "evoforge/errors.hpp"

namespace evoforge {

std::string_view to_string(RootDomain d) {
    switch (d) {
        case RootDomain::General: return "general";
        case RootDomain::Math: return "math";
        case RootDomain::Code: return "code";
    }
    throw ValidationError("unknown root domain value");
}

std::string_view to_string(Source s) {
    switch (s) {
        case Source::CorpusSeed: return "corpus-seed";
        case Source::DiversifiedVariant: return "diversified-variant";
        case Source::DepthEvolved: return "depth-evolved";
        case Source::Fused: return "fused";
    }
    throw ValidationError("unknown source value");
}

std::string_view to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Pending: return "pending";
        case RecordStatus::Viable: return "viable";
        case RecordStatus::ParseFailed: return "parse_failed";
        case RecordStatus::BackendFailed: return "backend_failed";
    }
    throw ValidationError("unknown status value");
}

RootDomain root_domain_from_string(std::string_view s) {
    if (s == "general") return RootDomain::General;
    if (s == "math") return RootDomain::Math;
    if (s == "code") return RootDomain::Code;
    throw ValidationError("unknown root domain: " + std::string(s));
}

Source source_from_string(std::string_view s) {
    if (s == "corpus-seed") return Source::CorpusSeed;
    if (s == "diversified-variant") return Source::DiversifiedVariant;
    if (s == "depth-evolved") return Source::DepthEvolved;
    if (s == "fused") return Source::Fused;
    throw ValidationError("unknown source: " + std::string(s));
}

RecordStatus status_from_string(std::string_view s) {
    if (s == "pending") return RecordStatus::Pending;
    if (s == "viable") return RecordStatus::Viable;
    if (s == "parse_failed") return RecordStatus::ParseFailed;
    if (s == "backend_failed") return RecordStatus::BackendFailed;
    throw ValidationError("unknown status: " + std::string(s));
}

void InstructionRecord::validate() const {
    if (id.empty()) throw ValidationError("record has empty id");

    std::size_t expected_parents = 0;
    switch (source) {
        case Source::CorpusSeed:
        case Source::DiversifiedVariant: expected_parents = 0; break;
        case Source::DepthEvolved: expected_parents = 1; break;
        case Source::Fused: expected_parents = 2; break;
    }
    if (parents.size() != expected_parents) {
        throw ValidationError("record " + id + ": source " + std::string(to_string(source)) +
                              " requires " + std::to_string(expected_parents) + " parents, has " +
                              std::to_string(parents.size()));
    }
    if (round_created < 0) throw ValidationError("record " + id + ": negative round_created");
    if (fusion_use_count < 0) throw ValidationError("record " + id + ": negative fusion_use_count");
    if (elements) {
        if (elements->objectives.empty()) {
            throw ValidationError("record " + id + ": decomposed but objectives empty");
        }
        if (objective_count != static_cast<int>(elements->objectives.size())) {
            throw ValidationError("record " + id + ": objective_count does not match objectives");
        }
    }
    if (uncertainty && (*uncertainty < 0.0 || !(*uncertainty == *uncertainty))) {
        throw ValidationError("record " + id + ": uncertainty must be a non-negative number");
    }
}

}  // namespace evoforge
