#include <doctest.h>

#include "evoforge/elements.hpp"
#include "evoforge/errors.hpp"
#include "evoforge/sections.hpp"
#include "evoforge/templates.hpp"

using namespace evoforge;

TEST_CASE("split_bold_sections recognizes both header colon placements") {
    auto sections = split_bold_sections(
        "**Extract Background Settings:**\n1.A fact.\n\n**Given Prompt**:\nBody text\n");
    REQUIRE(sections.size() == 2);
    CHECK(sections[0].header == "extract background settings");
    CHECK(sections[0].body == "1.A fact.");
    CHECK(sections[1].header == "given prompt");
    CHECK(sections[1].body == "Body text");
}

TEST_CASE("split_bold_sections is case-insensitive and whitespace-tolerant") {
    auto sections = split_bold_sections("  **EXTRACT   Objectives:**  \nSomething\n");
    REQUIRE(sections.size() == 1);
    CHECK(sections[0].header == "extract objectives");
}

TEST_CASE("section bodies stop at rules and headings") {
    auto sections = split_bold_sections("**Prompt:**\nKeep this\n---\nDrop this\n");
    REQUIRE(sections.size() == 1);
    CHECK(sections[0].body == "Keep this");

    sections = split_bold_sections("**Prompt:**\nKeep\n### Rewritten\nGone\n");
    REQUIRE(sections.size() == 1);
    CHECK(sections[0].body == "Keep");
}

TEST_CASE("inline bold text is not a header") {
    auto sections = split_bold_sections("1.**Extract Objective:** List the core task.\n");
    CHECK(sections.empty());
}

TEST_CASE("split_numbered_items splits on digit-dot lines") {
    auto items = split_numbered_items("1.First item.\n2.Second item.\n3.Third.\n");
    REQUIRE(items.size() == 3);
    CHECK(items[0] == "First item.");
    CHECK(items[1] == "Second item.");
    CHECK(items[2] == "Third.");
}

TEST_CASE("split_numbered_items accepts a space after the dot") {
    auto items = split_numbered_items("5. The SMS should be composed by the system.\n");
    REQUIRE(items.size() == 1);
    CHECK(items[0] == "The SMS should be composed by the system.");
}

TEST_CASE("multi-line items join with newlines preserved") {
    auto items = split_numbered_items("1.Code to debug:\n```python\na=1\n2.not an item\n```\n");
    REQUIRE(items.size() == 1);
    CHECK(items[0] == "Code to debug:\n```python\na=1\n2.not an item\n```");
}

TEST_CASE("is_na_body accepts trailing punctuation and case drift") {
    CHECK(is_na_body("N/A"));
    CHECK(is_na_body("n/a."));
    CHECK(is_na_body("  N/A.  \n"));
    CHECK(is_na_body(""));
    CHECK_FALSE(is_na_body("N/A but also text"));
    CHECK_FALSE(is_na_body("Not applicable"));
}

TEST_CASE("render_extracted uses N/A for empty sections") {
    DecomposedElements e;
    e.objectives = {"Write an SMS."};
    std::string block = render_extracted(e);
    CHECK(block ==
          "**Background Settings:**\nN/A\n\n**Objectives:**\n1.Write an SMS.\n\n"
          "**Constraints:**\nN/A");
}

TEST_CASE("render_template substitutes placeholders with flexible spacing") {
    std::string out = render_template("a {{  x  }} b {{y}} c", {{"x", "1"}, {"y", "2"}});
    CHECK(out == "a 1 b 2 c");
}

TEST_CASE("render_template rejects unknown and unused variables") {
    CHECK_THROWS_AS(render_template("{{ missing }}", {}), ValidationError);
    CHECK_THROWS_AS(render_template("no placeholder", {{"x", "1"}}), ValidationError);
}

TEST_CASE("templates embed their worked examples verbatim") {
    CHECK(decomposition_template().find("I have to pick up my son.") != std::string_view::npos);
    CHECK(decomposition_template().find("**Given Prompt**:") != std::string_view::npos);
    CHECK(diversification_template().find("follows,do no provide") != std::string_view::npos);
    CHECK(depth_template().find("Maddie =  (age of Anika + age of Adam) / 2") !=
          std::string_view::npos);
    CHECK(fusion_template().find("**Constrains:**") != std::string_view::npos);
    CHECK(fusion_template().find("user\xE2\x80\x99s supervisor") != std::string_view::npos);
}
