#pragma once

#include "asmsearch/ir.hpp"

#include <string>
#include <string_view>

namespace asmsearch {

// Parses newline-separated Intel-syntax assembly (disassembler-style) into the
// instruction IR. Lines may be label definitions ("sym:"), instructions, or
// comments (";" to end of line). Assembler directives (".text", ".globl" ...)
// are skipped. Labels with no following instruction are dropped.
//
// Known mnemonics get strict operand parsing; unknown mnemonics are accepted
// permissively (operands that fail to parse become opaque label refs) so the
// sequence metrics still cover arbitrary compiler output.
//
// Throws MalformedLine / EmptyFunction.
AssemblyFunction parse_assembly(std::string_view text);

// Renders an AssemblyFunction back to text. parse(render(f)) == f.
std::string render(const AssemblyFunction& f);

} // namespace asmsearch
