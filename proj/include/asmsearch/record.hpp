#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace asmsearch {

enum class Language { c, cpp, go, java, javascript, php, python, ruby, other };

std::string_view to_string(Language lang);
Language language_from_string(std::string_view tag); // unknown tags -> other

struct SourceFunction {
    std::string name;
    Language language = Language::other;
    std::string body;
    std::optional<std::string> docstring;
    std::size_t body_line_count = 0; // non-blank lines of body

    bool operator==(const SourceFunction&) const = default;
};

// Recomputes the non-blank line count of a function body.
std::size_t count_body_lines(std::string_view body);

enum class Compiler { gcc7, gcc9, gcc11, clang9, clang11, clang12 };
enum class OptLevel { O0, O1, O2, O3, Os };

inline constexpr int kCompilerCount = 6;
inline constexpr int kOptLevelCount = 5;

std::string_view to_string(Compiler c);   // "gcc-7" ... "clang-12"
std::string_view to_string(OptLevel o);   // "O0" ... "Os"
Compiler compiler_from_string(std::string_view s); // throws std::invalid_argument
OptLevel opt_level_from_string(std::string_view s);

struct CompilationProfile {
    Compiler compiler = Compiler::gcc7;
    OptLevel opt_level = OptLevel::O0;
    bool stripped = false;

    bool operator==(const CompilationProfile&) const = default;
};

// The corpus unit: a source function paired with its (real or virtual)
// assembly text. The assembly is kept as raw text and parsed lazily.
struct PairRecord {
    std::string id;
    SourceFunction source;
    std::string assembly_text;
    CompilationProfile profile;
    bool inline_flag = false; // assembly contains inlined callees (ingestion metadata)

    bool operator==(const PairRecord&) const = default;
};

struct FilterReport {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t dropped_inline = 0;
    std::uint64_t dropped_short = 0;

    FilterReport& operator+=(const FilterReport& other) {
        input += other.input;
        output += other.output;
        dropped_inline += other.dropped_inline;
        dropped_short += other.dropped_short;
        return *this;
    }
};

} // namespace asmsearch
