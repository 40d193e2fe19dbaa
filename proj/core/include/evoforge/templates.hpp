#pragma once

#include <map>
#include <string>
#include <string_view>

namespace evoforge {

// The four prompt templates, embedded at build time from core/templates/.
std::string_view decomposition_template();
std::string_view diversification_template();
std::string_view depth_template();
std::string_view fusion_template();

// Substitutes "{{ name }}" placeholders (whitespace inside the braces is
// flexible). Throws ValidationError on an unknown placeholder or an unused
// variable, so prompt-construction bugs never reach a backend.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

}  // namespace evoforge
