#include "evoforge/gateway/mock_backend.hpp"

#include <json.hpp>

#include "evoforge/decomposer.hpp"
#include "evoforge/errors.hpp"
#include "evoforge/rng.hpp"
#include "evoforge/sections.hpp"

namespace evoforge {
namespace {

using json = nlohmann::json;

std::string first_words(const std::string& text, std::size_t count) {
    std::string out;
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) {
            if (words == count) break;
            ++words;
            in_word = true;
            if (!out.empty()) out.push_back(' ');
        }
        if (space) {
            in_word = false;
            continue;
        }
        out.push_back(c);
    }
    return out;
}

// The target instruction of a decomposition prompt is the final
// "**Given Prompt:**" block.
std::string after_last_marker(const std::string& text, const std::string& marker) {
    std::size_t pos = text.rfind(marker);
    if (pos == std::string::npos) return {};
    return trim(text.substr(pos + marker.size()));
}

struct PromptAndElements {
    std::string text;
    DecomposedElements elements;
};

// Reads one "**Prompt:** + extracted block" group from a slice of a prompt.
PromptAndElements parse_prompt_block(std::string_view slice,
                                     std::initializer_list<std::string_view> prompt_names) {
    auto sections = split_bold_sections(slice);
    PromptAndElements out;
    if (const ReplySection* p = find_section(sections, prompt_names)) out.text = p->body;
    auto items = [&](std::initializer_list<std::string_view> names) -> std::vector<std::string> {
        const ReplySection* s = find_section(sections, names);
        if (!s || is_na_body(s->body)) return {};
        return split_numbered_items(s->body);
    };
    out.elements.background = items({"background settings"});
    out.elements.objectives = items({"objectives", "objective"});
    out.elements.constraints = items({"constraints", "constrains"});
    return out;
}

}  // namespace

BackendCapabilities MockBackend::capabilities() const {
    return {static_cast<bool>(chat_fn_), static_cast<bool>(logprob_fn_),
            static_cast<bool>(embed_fn_)};
}

std::string MockBackend::chat(const ChatRequest& request) {
    if (!chat_fn_) throw CapabilityError("mock backend has no chat handler");
    ++chat_calls_;
    return chat_fn_(request);
}

LogprobResult MockBackend::logprobs(const LogprobRequest& request) {
    if (!logprob_fn_) throw CapabilityError("mock backend has no logprob handler");
    ++logprob_calls_;
    return {logprob_fn_(request)};
}

EmbeddingResult MockBackend::embed(const EmbeddingRequest& request) {
    if (!embed_fn_) throw CapabilityError("mock backend has no embedding handler");
    ++embed_calls_;
    return {embed_fn_(request)};
}

ScriptedSimulator::ScriptedSimulator(SimulatorOptions options) : options_(options) {
    if (options_.new_prompts_per_reply < 0) {
        throw ValidationError("new_prompts_per_reply must be >= 0");
    }
}

std::string ScriptedSimulator::chat_reply(const std::string& prompt) {
    if (prompt.find("act as a Prompt Fusion Specialist") != std::string::npos) {
        return fusion_reply(prompt);
    }
    if (prompt.find("Develop ten new objectives") != std::string::npos) {
        return diversification_reply(prompt);
    }
    if (prompt.find("increase its difficulty using ONLY one of the following methods") !=
        std::string::npos) {
        return depth_reply(prompt);
    }
    if (prompt.find("**Extract Background Settings:**") != std::string::npos) {
        return decomposition_reply(prompt);
    }
    return freeform_reply(prompt);
}

std::string ScriptedSimulator::decomposition_reply(const std::string& prompt) const {
    std::string target = after_last_marker(prompt, "**Given Prompt:**");
    std::uint64_t h = fnv1a(target);

    DecomposedElements elements;
    if (h % 3 != 0) {
        elements.background.push_back("Context noted for: " + first_words(target, 4) + ".");
    }
    elements.objectives.push_back(target.empty() ? std::string("Answer the request.") : target);
    if (h % 4 != 0) {
        elements.constraints.push_back("Keep the answer under " + std::to_string(20 + h % 80) +
                                       " words.");
    }
    return render_decomposition_reply(elements);
}

std::string ScriptedSimulator::diversification_reply(const std::string& prompt) const {
    // Target sits between the Given Prompt marker and its extracted block.
    std::string tail = after_last_marker(prompt, "**Given Prompt:**");
    std::size_t cut = tail.find("**Background Settings:**");
    std::string target = trim(cut == std::string::npos ? tail : tail.substr(0, cut));

    std::string reply;
    for (int i = 1; i <= options_.new_prompts_per_reply; ++i) {
        reply.append("**New Objective ").append(std::to_string(i)).append(":**\n");
        reply.append("Recast the task with emphasis ").append(std::to_string(i)).append(".\n\n");
        reply.append("**New Prompt ").append(std::to_string(i)).append(":**\n");
        reply.append(target).append(" Additionally explore aspect ").append(std::to_string(i));
        reply.append(".\n\n");
    }
    return reply;
}

std::string ScriptedSimulator::depth_reply(const std::string& prompt) const {
    std::size_t pos = prompt.rfind("### Original");
    PromptAndElements original =
        parse_prompt_block(std::string_view(prompt).substr(pos == std::string::npos ? 0 : pos),
                           {"prompt"});

    DecomposedElements evolved = original.elements;
    evolved.constraints.push_back("Verify the result against condition " +
                                  std::to_string(fnv1a(original.text) % 89 + 1) + ".");
    if (evolved.objectives.empty()) evolved.objectives.push_back("Answer the request.");

    std::string reply = "### Rewritten\n\n**Prompt:**\n";
    reply.append(original.text).append(" Then double-check the added condition.\n\n");
    reply.append(render_extracted(evolved));
    reply.push_back('\n');
    return reply;
}

std::string ScriptedSimulator::fusion_reply(const std::string& prompt) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++fusion_calls_;
        if (options_.poison_every_fusion > 0 &&
            fusion_calls_ % static_cast<std::uint64_t>(options_.poison_every_fusion) == 0) {
            return "These prompts resist fusion; no coherent combined task exists.";
        }
    }

    std::size_t a_pos = prompt.rfind("**Given Prompt A:**");
    std::size_t b_pos = prompt.rfind("**Given Prompt B:**");
    if (a_pos == std::string::npos || b_pos == std::string::npos || b_pos <= a_pos) {
        return "Malformed fusion prompt.";
    }
    PromptAndElements a = parse_prompt_block(
        std::string_view(prompt).substr(a_pos, b_pos - a_pos), {"given prompt a"});
    PromptAndElements b =
        parse_prompt_block(std::string_view(prompt).substr(b_pos), {"given prompt b"});

    auto merged = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
        std::vector<std::string> out = x;
        out.insert(out.end(), y.begin(), y.end());
        return out;
    };

    std::string reply;
    auto block = [&reply](const char* header, const std::vector<std::string>& items) {
        reply.append("**").append(header).append(":**\n");
        if (items.empty()) {
            reply.append("N/A\n");
        } else {
            for (std::size_t i = 0; i < items.size(); ++i) {
                reply.append(std::to_string(i + 1)).append(".").append(items[i]).push_back('\n');
            }
        }
        reply.push_back('\n');
    };
    block("Fused Background Settings", merged(a.elements.background, b.elements.background));
    auto objectives = merged(a.elements.objectives, b.elements.objectives);
    if (objectives.empty()) objectives.push_back("Complete both tasks together.");
    block("Fused Objectives", objectives);
    auto constraints = merged(a.elements.constraints, b.elements.constraints);
    constraints.push_back("Treat both requests as one combined scenario.");
    block("Fused Constraints", constraints);
    reply.append("**Fused Prompt:**\n");
    reply.append(a.text).append(" In the same scenario: ").append(b.text).push_back('\n');
    return reply;
}

std::string ScriptedSimulator::freeform_reply(const std::string& prompt) const {
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%04llx",
                  static_cast<unsigned long long>(fnv1a(prompt) & 0xFFFF));
    return "Worked answer " + std::string(tag) + " covering: " + first_words(prompt, 6) +
           ". Reasoning first, then the final result.";
}

std::vector<double> ScriptedSimulator::response_logprobs(const std::string& instruction,
                                                         const std::string& response) {
    std::size_t tokens = 0;
    bool in_word = false;
    for (char c : response) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++tokens;
        in_word = !space;
    }
    if (tokens == 0) tokens = 1;
    double lp = -0.02 - static_cast<double>(fnv1a(instruction) % 1000) / 10000.0;
    return std::vector<double>(tokens, lp);
}

std::vector<std::vector<double>> ScriptedSimulator::embeddings(
    const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::uint64_t h = fnv1a(text);
        std::vector<double> v(8);
        for (int k = 0; k < 8; ++k) {
            v[k] = static_cast<double>((h >> (8 * k)) & 0xFF) / 255.0 - 0.5;
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq < 1e-12) v[0] = 1.0;
        out.push_back(std::move(v));
    }
    return out;
}

std::shared_ptr<MockBackend> make_scripted_backend(std::shared_ptr<ScriptedSimulator> simulator) {
    auto backend = std::make_shared<MockBackend>();
    backend->set_chat(
        [simulator](const ChatRequest& request) { return simulator->chat_reply(request.prompt); });
    backend->set_logprobs([simulator](const LogprobRequest& request) {
        return simulator->response_logprobs(request.instruction, request.response);
    });
    backend->set_embeddings([simulator](const EmbeddingRequest& request) {
        return simulator->embeddings(request.texts);
    });
    return backend;
}

HttpResponse SimulatorTransport::post(
    const std::string& path, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>& /*headers*/) {
    ++calls_;
    json request = json::parse(body);
    json reply;

    if (path == "/v1/chat/completions") {
        std::string prompt = request.at("messages").at(0).at("content").get<std::string>();
        reply["choices"] =
            json::array({json{{"message", json{{"content", simulator_->chat_reply(prompt)}}}}});
    } else if (path == "/v1/completions") {
        // Echoed-prompt scoring: whitespace tokenization with byte offsets.
        std::string full = request.at("prompt").get<std::string>();
        json tokens = json::array();
        json offsets = json::array();
        json logprobs = json::array();
        double lp = -0.02 - static_cast<double>(fnv1a(full) % 1000) / 10000.0;
        std::size_t i = 0;
        bool first = true;
        while (i < full.size()) {
            while (i < full.size() && std::isspace(static_cast<unsigned char>(full[i]))) ++i;
            if (i >= full.size()) break;
            std::size_t start = i;
            while (i < full.size() && !std::isspace(static_cast<unsigned char>(full[i]))) ++i;
            tokens.push_back(full.substr(start, i - start));
            offsets.push_back(start);
            logprobs.push_back(first ? json(nullptr) : json(lp));
            first = false;
        }
        json lpobj;
        lpobj["tokens"] = tokens;
        lpobj["text_offset"] = offsets;
        lpobj["token_logprobs"] = logprobs;
        reply["choices"] = json::array({json{{"logprobs", lpobj}}});
    } else if (path == "/v1/embeddings") {
        std::vector<std::string> texts;
        const json& input = request.at("input");
        if (input.is_string()) {
            texts.push_back(input.get<std::string>());
        } else {
            for (const auto& t : input) texts.push_back(t.get<std::string>());
        }
        auto vectors = simulator_->embeddings(texts);
        json data = json::array();
        for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
            data.push_back(json{{"index", idx}, {"embedding", vectors[idx]}});
        }
        reply["data"] = data;
    } else {
        return {404, "unknown path: " + path};
    }
    return {200, reply.dump()};
}

}  // namespace evoforge
