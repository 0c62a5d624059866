#include "asmsearch/pipeline.hpp"
#include "asmsearch/parser.hpp"
#include "asmsearch/prf.hpp"
#include "asmsearch/tokenizer.hpp"

#include <cctype>
#include <sstream>

namespace asmsearch {

bool keep_record(const PairRecord& record, std::size_t min_body_lines,
                 FilterReport& report) {
    ++report.input;
    if (record.inline_flag) {
        ++report.dropped_inline;
        return false;
    }
    if (record.source.body_line_count < min_body_lines) {
        ++report.dropped_short;
        return false;
    }
    ++report.output;
    return true;
}

std::vector<PairRecord> filter_pairs(const std::vector<PairRecord>& records,
                                     std::size_t min_body_lines,
                                     FilterReport& report) {
    std::vector<PairRecord> kept;
    for (const PairRecord& record : records)
        if (keep_record(record, min_body_lines, report))
            kept.push_back(record);
    return kept;
}

namespace {

struct CommentSyntax {
    bool slash_line = false;  // //
    bool block = false;       // /* */ (non-nesting)
    bool hash_line = false;   // #
};

CommentSyntax syntax_for(Language lang) {
    switch (lang) {
    case Language::c:
    case Language::cpp:
    case Language::go:
    case Language::java:
    case Language::javascript:
        return {true, true, false};
    case Language::php:
        return {true, true, true};
    case Language::python:
    case Language::ruby:
        return {false, false, true};
    case Language::other:
        return {};
    }
    return {};
}

std::string trim_trailing_per_line(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::size_t end = eol == std::string::npos ? text.size() : eol;
        std::size_t last = end;
        while (last > pos &&
               std::isspace(static_cast<unsigned char>(text[last - 1])) &&
               text[last - 1] != '\n')
            --last;
        out.append(text, pos, last - pos);
        if (eol == std::string::npos)
            break;
        out.push_back('\n');
        pos = eol + 1;
    }
    return out;
}

} // namespace

SourceFunction strip_source_comments(const SourceFunction& s) {
    const CommentSyntax syntax = syntax_for(s.language);
    const std::string& body = s.body;
    std::string out;
    out.reserve(body.size());

    std::size_t i = 0;
    char quote = 0;
    while (i < body.size()) {
        char c = body[i];
        if (quote != 0) {
            out.push_back(c);
            if (c == '\\' && i + 1 < body.size()) {
                out.push_back(body[i + 1]);
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
            ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            quote = c;
            out.push_back(c);
            ++i;
            continue;
        }
        if (syntax.block && c == '/' && i + 1 < body.size() &&
            body[i + 1] == '*') {
            std::size_t close = body.find("*/", i + 2);
            if (close == std::string::npos)
                throw UnterminatedComment();
            out.push_back(' '); // C semantics: a block comment reads as one space
            // newlines inside the comment keep the line structure
            for (std::size_t j = i; j < close; ++j)
                if (body[j] == '\n')
                    out.push_back('\n');
            i = close + 2;
            continue;
        }
        if (syntax.slash_line && c == '/' && i + 1 < body.size() &&
            body[i + 1] == '/') {
            while (i < body.size() && body[i] != '\n')
                ++i;
            continue;
        }
        if (syntax.hash_line && c == '#') {
            while (i < body.size() && body[i] != '\n')
                ++i;
            continue;
        }
        out.push_back(c);
        ++i;
    }

    SourceFunction result = s;
    result.body = trim_trailing_per_line(out);
    result.body_line_count = count_body_lines(result.body);
    return result;
}

namespace {

std::string strip_star_border(std::string_view line) {
    auto is_border = [](char c) {
        return c == '*' || std::isspace(static_cast<unsigned char>(c));
    };
    std::size_t begin = 0, end = line.size();
    while (begin < end && is_border(line[begin]))
        ++begin;
    while (end > begin && is_border(line[end - 1]))
        --end;
    return std::string(line.substr(begin, end - begin));
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c));
        if (!space && !in_word)
            ++count;
        in_word = !space;
    }
    return count;
}

} // namespace

std::optional<std::string> clean_docstring(const std::string& text,
                                           std::size_t min_words) {
    std::string cleaned;
    bool seen_content = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) -
                                  pos);
        std::string stripped = strip_star_border(line);
        if (stripped.empty()) {
            if (seen_content)
                break; // first blank line ends the first paragraph
        } else {
            if (seen_content)
                cleaned.push_back('\n');
            cleaned += stripped;
            seen_content = true;
        }
        if (eol == std::string::npos)
            break;
        pos = eol + 1;
    }
    if (word_count(cleaned) < min_words)
        return std::nullopt;
    return cleaned;
}

CompilationProfile assign_profile(std::uint64_t rng_seed,
                                  std::string_view record_id) {
    std::uint64_t h = prf(rng_seed, fnv1a64(record_id));
    std::uint64_t cell = h % (kCompilerCount * kOptLevelCount);
    CompilationProfile profile;
    profile.compiler = static_cast<Compiler>(cell / kOptLevelCount);
    profile.opt_level = static_cast<OptLevel>(cell % kOptLevelCount);
    profile.stripped = (prf(h, 1) & 1) != 0;
    return profile;
}

std::size_t total_token_count(const PairRecord& record) {
    AssemblyFunction f = parse_assembly(record.assembly_text);
    std::istringstream source(record.source.body);
    std::size_t source_tokens = 0;
    std::string word;
    while (source >> word)
        ++source_tokens;
    return f.token_count + source_tokens;
}

std::vector<PairRecord> sample_mix(const std::vector<PairRecord>& records,
                                   std::uint64_t rng_seed) {
    (void)rng_seed; // the interleave is fully determined by input order
    std::vector<const PairRecord*> shorts, longs;
    for (const PairRecord& record : records) {
        std::size_t tokens = total_token_count(record);
        if (tokens > kMixTotalLimit)
            continue;
        (tokens <= kMixShortLimit ? shorts : longs).push_back(&record);
    }

    std::vector<PairRecord> out;
    if (shorts.empty() || longs.empty()) {
        // degenerate mix: a single bucket passes through unchanged
        for (const PairRecord* r : shorts)
            out.push_back(*r);
        for (const PairRecord* r : longs)
            out.push_back(*r);
        return out;
    }

    std::size_t si = 0, li = 0;
    while (true) {
        if (si + 3 > shorts.size() || li >= longs.size())
            break; // a full S S S L round no longer fits; drop leftovers
        out.push_back(*shorts[si++]);
        out.push_back(*shorts[si++]);
        out.push_back(*shorts[si++]);
        out.push_back(*longs[li++]);
    }
    return out;
}

bool infer_inline_heuristic(const AssemblyFunction& f) {
    // Local jump targets (loc_*, .L*) are not symbols; a second named symbol
    // inside the body suggests an inlined callee.
    std::size_t symbols = 0;
    for (const auto& [label, index] : f.labels) {
        (void)index;
        if (label.rfind("loc_", 0) == 0 || label.front() == '.')
            continue;
        ++symbols;
    }
    return symbols > 1;
}

} // namespace asmsearch
