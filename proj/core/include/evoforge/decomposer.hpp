#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "evoforge/elements.hpp"
#include "evoforge/gateway/gateway.hpp"
#include "evoforge/record.hpp"

namespace evoforge {

inline constexpr const char* kDecomposerBackendId = "decomposer";

// The decomposition prompt: the template verbatim with the instruction
// substituted as the final "**Given Prompt:**" block.
std::string build_decomposition_prompt(const std::string& instruction);

// Parses a sectioned decomposition reply. Total: returns elements or
// nullopt (missing or empty Objectives); never a partial result.
std::optional<DecomposedElements> parse_decomposition(std::string_view reply);

// Formats elements back into the reply grammar; parse_decomposition of the
// result reproduces the input.
std::string render_decomposition_reply(const DecomposedElements& elements);

// Runs the decomposition round trip for one record and settles its status:
// viable on success, parse_failed / backend_failed otherwise. No-op when
// the record is already decomposed.
void decompose(InstructionRecord& record, Gateway& gateway,
               const std::string& backend_id = kDecomposerBackendId);

}  // namespace evoforge
