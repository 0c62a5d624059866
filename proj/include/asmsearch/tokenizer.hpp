#pragma once

#include "asmsearch/ir.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace asmsearch {

// Whitespace/punctuation token stream of one instruction line: identifier and
// number runs are single tokens, every punctuation character is its own token,
// string literals are kept verbatim as single tokens.
//
//   "mov rax, 5"       -> mov rax , 5
//   "lea edi, [rax+1]" -> lea edi , [ rax + 1 ]
void tokenize_line(std::string_view line, std::vector<std::string>& out);

// Token stream of a whole function: instruction lines in order. Label
// definitions carry no tokens. Deterministic; token order equals text order.
std::vector<std::string> tokenize(const AssemblyFunction& f);

} // namespace asmsearch
