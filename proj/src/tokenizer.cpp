#include "asmsearch/tokenizer.hpp"

#include <cctype>

namespace asmsearch {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           c == '$' || c == '@' || c == '?';
}

} // namespace

void tokenize_line(std::string_view line, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            // string literal: single verbatim token, quotes included
            std::size_t j = i + 1;
            while (j < line.size()) {
                if (line[j] == '\\' && j + 1 < line.size())
                    j += 2;
                else if (line[j] == c)
                    break;
                else
                    ++j;
            }
            if (j < line.size())
                ++j; // include closing quote
            out.emplace_back(line.substr(i, j - i));
            i = j;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t j = i;
            while (j < line.size() && is_word_char(line[j]))
                ++j;
            out.emplace_back(line.substr(i, j - i));
            i = j;
            continue;
        }
        out.emplace_back(1, c);
        ++i;
    }
}

std::vector<std::string> tokenize(const AssemblyFunction& f) {
    std::vector<std::string> tokens;
    for (const Instruction& insn : f.instructions)
        tokenize_line(insn.raw_text, tokens);
    return tokens;
}

} // namespace asmsearch
