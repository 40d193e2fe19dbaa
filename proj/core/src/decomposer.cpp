#include "evoforge/decomposer.hpp"

#include "evoforge/errors.hpp"
#include "evoforge/sections.hpp"
#include "evoforge/templates.hpp"

namespace evoforge {
namespace {

std::vector<std::string> section_items(const std::vector<ReplySection>& sections,
                                       std::initializer_list<std::string_view> names) {
    const ReplySection* section = find_section(sections, names);
    if (!section || is_na_body(section->body)) return {};
    return split_numbered_items(section->body);
}

void append_reply_block(std::string& out, std::string_view header,
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

std::string build_decomposition_prompt(const std::string& instruction) {
    if (instruction.empty()) throw ValidationError("instruction must be non-empty");
    return render_template(decomposition_template(), {{"prompt", instruction}});
}

std::optional<DecomposedElements> parse_decomposition(std::string_view reply) {
    auto sections = split_bold_sections(reply);

    // The template itself spells both "Background" and "Backgrounds".
    const ReplySection* objectives_section =
        find_section(sections, {"extract objectives", "extract objective"});
    if (!objectives_section || is_na_body(objectives_section->body)) return std::nullopt;

    DecomposedElements elements;
    elements.objectives = split_numbered_items(objectives_section->body);
    if (elements.objectives.empty()) return std::nullopt;
    elements.background = section_items(
        sections, {"extract background settings", "extract backgrounds settings"});
    elements.constraints = section_items(sections, {"extract constraints", "extract constraint"});
    return elements;
}

std::string render_decomposition_reply(const DecomposedElements& elements) {
    std::string out;
    append_reply_block(out, "Extract Background Settings", elements.background);
    out.push_back('\n');
    append_reply_block(out, "Extract Objectives", elements.objectives);
    out.push_back('\n');
    append_reply_block(out, "Extract Constraints", elements.constraints);
    out.pop_back();
    return out;
}

void decompose(InstructionRecord& record, Gateway& gateway, const std::string& backend_id) {
    if (record.elements) return;

    std::string reply;
    try {
        ChatRequest request;
        request.backend_id = backend_id;
        request.prompt = build_decomposition_prompt(record.text);
        reply = gateway.chat(request);
    } catch (const BackendError&) {
        record.status = RecordStatus::BackendFailed;
        return;
    }

    auto elements = parse_decomposition(reply);
    if (!elements) {
        record.status = RecordStatus::ParseFailed;
        return;
    }
    record.objective_count = static_cast<int>(elements->objectives.size());
    record.elements = std::move(*elements);
    record.status = RecordStatus::Viable;
}

}  // namespace evoforge
