#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace asmsearch {

// Structured operand model for disassembler-style Intel syntax.

struct RegisterOperand {
    std::string name; // canonical lowercase ("rax", "edi", "r8b", ...)
    int width = 64;   // bits, one of 8/16/32/64

    bool operator==(const RegisterOperand&) const = default;
};

struct ImmediateOperand {
    std::int64_t value = 0;

    bool operator==(const ImmediateOperand&) const = default;
};

struct MemoryOperand {
    std::optional<RegisterOperand> base;
    std::optional<RegisterOperand> index;
    int scale = 1;                  // meaningful only when index is present
    std::int64_t displacement = 0;
    int size_hint = 0;              // access size in bytes (1/2/4/8), 0 = unknown

    bool operator==(const MemoryOperand&) const = default;
};

struct LabelRefOperand {
    std::string symbol;

    bool operator==(const LabelRefOperand&) const = default;
};

using Operand =
    std::variant<RegisterOperand, ImmediateOperand, MemoryOperand, LabelRefOperand>;

struct Instruction {
    std::string mnemonic;           // lowercase
    std::vector<Operand> operands;
    std::string raw_text;           // trimmed source line, comment stripped

    bool operator==(const Instruction&) const = default;
};

struct AssemblyFunction {
    std::string name;                          // first label at index 0, if any
    std::vector<Instruction> instructions;
    std::map<std::string, std::size_t> labels; // label -> index of next instruction
    std::size_t token_count = 0;               // == tokenize(*this).size()

    bool operator==(const AssemblyFunction&) const = default;
};

// Register lookup shared by the parser and the emulator.
struct RegisterInfo {
    std::string_view name;
    int gpr_index;  // 0..15 in rax,rcx,rdx,rbx,rsp,rbp,rsi,rdi,r8..r15 order; 16 = rip
    int width;      // bits
    bool high_byte; // ah/ch/dh/bh
};

// Returns nullptr when `name` is not an x86-64 general purpose register (or rip).
const RegisterInfo* lookup_register(std::string_view name);

inline constexpr int kRipIndex = 16;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedLine : ParseError {
    std::size_t line_no;
    MalformedLine(std::size_t line, const std::string& what)
        : ParseError("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct EmptyFunction : ParseError {
    EmptyFunction() : ParseError("no instructions in function") {}
};

} // namespace asmsearch
