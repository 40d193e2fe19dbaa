#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace evoforge {

// One "**Header:**" section of a model reply. Headers are normalized to
// lowercase with collapsed whitespace and no asterisks or trailing colon.
struct ReplySection {
    std::string header;
    std::string body;
};

// Splits a reply into bold-header sections. A header is a line that, after
// trimming, is exactly "**Name:**" or "**Name**:". Bodies run until the
// next header, a "---" rule, a "###" heading, or the end of the reply, and
// are trimmed of outer blank lines.
std::vector<ReplySection> split_bold_sections(std::string_view reply);

// First section whose normalized header equals any of `names` (already
// lowercase); nullptr when absent.
const ReplySection* find_section(const std::vector<ReplySection>& sections,
                                 std::initializer_list<std::string_view> names);

// Splits a section body into items at lines starting with "<digits>.".
// Lines inside ``` fences never start an item, so code blocks stay one
// verbatim item. Continuation lines are joined with their newlines kept.
// Non-numbered text before the first item becomes an item of its own.
std::vector<std::string> split_numbered_items(std::string_view body);

// "N/A" (any case, optional trailing punctuation/whitespace) or blank.
bool is_na_body(std::string_view body);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace evoforge
