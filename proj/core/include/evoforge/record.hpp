#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoforge/elements.hpp"

namespace evoforge {

enum class RootDomain { General, Math, Code };
enum class Source { CorpusSeed, DiversifiedVariant, DepthEvolved, Fused };
enum class RecordStatus { Pending, Viable, ParseFailed, BackendFailed };

std::string_view to_string(RootDomain d);
std::string_view to_string(Source s);
std::string_view to_string(RecordStatus s);
RootDomain root_domain_from_string(std::string_view s);
Source source_from_string(std::string_view s);
RecordStatus status_from_string(std::string_view s);

// One instruction in the pool, with lineage and scoring state.
struct InstructionRecord {
    std::string id;
    std::string text;
    std::optional<std::string> response;
    std::optional<DecomposedElements> elements;
    RootDomain root_domain = RootDomain::General;
    Source source = Source::CorpusSeed;
    int round_created = 0;
    std::vector<std::string> parents;  // 0 for seeds/variants, 1 depth, 2 fused
    int fusion_use_count = 0;          // times drawn as a fusion parent
    int objective_count = 0;           // |elements.objectives| once decomposed
    std::optional<double> uncertainty;
    RecordStatus status = RecordStatus::Pending;

    bool viable() const { return status == RecordStatus::Viable; }
    bool decomposed() const { return elements.has_value(); }

    // Structural invariants (parent arity vs source, objective count,
    // non-empty objectives when decomposed). Throws ValidationError.
    void validate() const;
};

}  // namespace evoforge
