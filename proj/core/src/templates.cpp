#include "evoforge/templates.hpp"

#include <set>

#include "evoforge/errors.hpp"
#include "evoforge/sections.hpp"
#include "evoforge/templates_generated.hpp"

namespace evoforge {

std::string_view decomposition_template() { return detail::kDecompositionTemplate; }
std::string_view diversification_template() { return detail::kDiversificationTemplate; }
std::string_view depth_template() { return detail::kDepthTemplate; }
std::string_view fusion_template() { return detail::kFusionTemplate; }

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    std::set<std::string> used;

    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            throw ValidationError("unterminated placeholder in template");
        }
        out.append(tmpl.substr(pos, open - pos));
        std::string name = trim(tmpl.substr(open + 2, close - open - 2));
        auto it = vars.find(name);
        if (it == vars.end()) {
            throw ValidationError("template placeholder has no value: " + name);
        }
        out.append(it->second);
        used.insert(name);
        pos = close + 2;
    }

    for (const auto& [name, value] : vars) {
        if (!used.count(name)) {
            throw ValidationError("template variable never used: " + name);
        }
    }
    return out;
}

}  // namespace evoforge
