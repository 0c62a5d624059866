#include "asmsearch/record.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace asmsearch {

namespace {

struct LanguageTag {
    Language lang;
    std::string_view tag;
};

constexpr std::array<LanguageTag, 9> kLanguages = {{
    {Language::c, "c"},
    {Language::cpp, "cpp"},
    {Language::go, "go"},
    {Language::java, "java"},
    {Language::javascript, "javascript"},
    {Language::php, "php"},
    {Language::python, "python"},
    {Language::ruby, "ruby"},
    {Language::other, "other"},
}};

constexpr std::array<std::string_view, 6> kCompilerNames = {
    "gcc-7", "gcc-9", "gcc-11", "clang-9", "clang-11", "clang-12"};

constexpr std::array<std::string_view, 5> kOptLevelNames = {"O0", "O1", "O2",
                                                            "O3", "Os"};

} // namespace

std::string_view to_string(Language lang) {
    for (const auto& entry : kLanguages)
        if (entry.lang == lang)
            return entry.tag;
    return "other";
}

Language language_from_string(std::string_view tag) {
    for (const auto& entry : kLanguages)
        if (entry.tag == tag)
            return entry.lang;
    return Language::other;
}

std::string_view to_string(Compiler c) {
    return kCompilerNames[static_cast<int>(c)];
}

std::string_view to_string(OptLevel o) {
    return kOptLevelNames[static_cast<int>(o)];
}

Compiler compiler_from_string(std::string_view s) {
    for (int i = 0; i < kCompilerCount; ++i)
        if (kCompilerNames[i] == s)
            return static_cast<Compiler>(i);
    throw std::invalid_argument("unknown compiler: " + std::string(s));
}

OptLevel opt_level_from_string(std::string_view s) {
    for (int i = 0; i < kOptLevelCount; ++i)
        if (kOptLevelNames[i] == s)
            return static_cast<OptLevel>(i);
    throw std::invalid_argument("unknown optimization level: " + std::string(s));
}

std::size_t count_body_lines(std::string_view body) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t eol = body.find('\n', pos);
        std::string_view line = body.substr(
            pos, eol == std::string_view::npos ? body.size() - pos : eol - pos);
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) {
                ++count;
                break;
            }
        if (eol == std::string_view::npos)
            break;
        pos = eol + 1;
    }
    return count;
}

} // namespace asmsearch
