#pragma once

#include <string>
#include <vector>

namespace evoforge {

// The (Background, Objectives, Constraints) triple an instruction decomposes into.
// "N/A" sections decode to empty lists; items carry no numbering prefixes.
struct DecomposedElements {
    std::vector<std::string> background;
    std::vector<std::string> objectives;
    std::vector<std::string> constraints;

    bool operator==(const DecomposedElements&) const = default;
};

// Renders elements in the "**Background Settings:** / **Objectives:** /
// **Constraints:**" grammar the evolution prompts embed, with "N/A" for
// empty sections and "1." style item numbering.
std::string render_extracted(const DecomposedElements& elements);

}  // namespace evoforge
