#include "evoforge/sections.hpp"

#include <cctype>

#include "evoforge/elements.hpp"

namespace evoforge {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    // Drop a trailing empty line created by a final '\n'.
    if (!lines.empty() && lines.back().empty() && !text.empty() && text.back() == '\n') {
        lines.pop_back();
    }
    return lines;
}

// "**Name:**" or "**Name**:" on a line of its own; returns the normalized name.
bool parse_header_line(std::string_view line, std::string& name_out) {
    std::string t = trim(line);
    if (t.size() < 5 || t.compare(0, 2, "**") != 0) return false;
    std::string inner;
    if (t.size() >= 3 && t.compare(t.size() - 3, 3, ":**") == 0) {
        inner = t.substr(2, t.size() - 5);
    } else if (t.compare(t.size() - 3, 3, "**:") == 0) {
        inner = t.substr(2, t.size() - 5);
    } else {
        return false;
    }
    if (inner.empty() || inner.find('*') != std::string::npos) return false;
    // Normalize: lowercase, collapse whitespace runs.
    std::string name;
    bool pending_space = false;
    for (char c : trim(inner)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !name.empty()) name.push_back(' ');
        pending_space = false;
        name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (name.empty()) return false;
    name_out = std::move(name);
    return true;
}

bool is_rule_line(std::string_view line) {
    std::string t = trim(line);
    if (t.size() < 3) return false;
    for (char c : t) {
        if (c != '-') return false;
    }
    return true;
}

bool is_heading_line(std::string_view line) {
    std::string t = trim(line);
    return t.rfind("###", 0) == 0;
}

bool starts_numbered(std::string_view line, std::size_t& prefix_len) {
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t digits_start = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == digits_start || i >= line.size() || line[i] != '.') return false;
    prefix_len = i + 1;
    return true;
}

bool is_fence_line(std::string_view line) {
    std::string t = trim(line);
    return t.rfind("```", 0) == 0;
}

}  // namespace

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::vector<ReplySection> split_bold_sections(std::string_view reply) {
    std::vector<ReplySection> sections;
    std::string current_header;
    std::string current_body;
    bool in_section = false;

    auto flush = [&] {
        if (!in_section) return;
        sections.push_back({current_header, trim(current_body)});
        current_body.clear();
        in_section = false;
    };

    for (std::string_view line : split_lines(reply)) {
        std::string name;
        if (parse_header_line(line, name)) {
            flush();
            current_header = std::move(name);
            in_section = true;
            continue;
        }
        if (is_rule_line(line) || is_heading_line(line)) {
            flush();
            continue;
        }
        if (in_section) {
            current_body.append(line);
            current_body.push_back('\n');
        }
    }
    flush();
    return sections;
}

const ReplySection* find_section(const std::vector<ReplySection>& sections,
                                 std::initializer_list<std::string_view> names) {
    for (const auto& section : sections) {
        for (std::string_view name : names) {
            if (section.header == name) return &section;
        }
    }
    return nullptr;
}

std::vector<std::string> split_numbered_items(std::string_view body) {
    std::vector<std::string> items;
    std::string current;
    bool item_open = false;
    bool in_fence = false;

    auto flush = [&] {
        if (!item_open) return;
        std::string cleaned = trim(current);
        if (!cleaned.empty()) items.push_back(std::move(cleaned));
        current.clear();
        item_open = false;
    };

    for (std::string_view line : split_lines(body)) {
        std::size_t prefix_len = 0;
        if (!in_fence && starts_numbered(line, prefix_len)) {
            flush();
            item_open = true;
            std::string_view rest = line.substr(prefix_len);
            while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
            current.assign(rest);
            current.push_back('\n');
            continue;
        }
        if (is_fence_line(line)) in_fence = !in_fence;
        if (!item_open) {
            // Prelude text before the first numbered item becomes its own item.
            if (!trim(line).empty()) {
                item_open = true;
                current.assign(line);
                current.push_back('\n');
            }
            continue;
        }
        current.append(line);
        current.push_back('\n');
    }
    flush();
    return items;
}

bool is_na_body(std::string_view body) {
    std::string t = to_lower(trim(body));
    if (t.empty()) return true;
    if (t.rfind("n/a", 0) != 0) return false;
    for (std::size_t i = 3; i < t.size(); ++i) {
        char c = t[i];
        if (!is_space(c) && c != '.' && c != ',' && c != '!' && c != ';' && c != ':') return false;
    }
    return true;
}

namespace {

void append_items_block(std::string& out, std::string_view header,
                        const std::vector<std::string>& items) {
    out.append("**").append(header).append(":**\n");
    if (items.empty()) {
        out.append("N/A\n");
        return;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        out.append(std::to_string(i + 1)).append(".").append(items[i]).push_back('\n');
    }
}

}  // namespace

std::string render_extracted(const DecomposedElements& elements) {
    std::string out;
    append_items_block(out, "Background Settings", elements.background);
    out.push_back('\n');
    append_items_block(out, "Objectives", elements.objectives);
    out.push_back('\n');
    append_items_block(out, "Constraints", elements.constraints);
    // No trailing newline: templates place the block on its own line.
    out.pop_back();
    return out;
}

}  // namespace evoforge
