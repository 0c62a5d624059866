#pragma once

#include "asmsearch/ir.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace asmsearch {

// Seeded interpreter for the parsed instruction IR. The instruction pointer is
// an instruction index, not a byte address; control flow resolves through the
// function's label table. All randomness derives from prf() so two executions
// under one seed share an identical initial state:
//
//   gpr[i]   = prf(seed, i)                  for i = 0..15
//   rsp, rbp = prf(seed, 16) & 0x00007ffffffffff0   (16-aligned stack base)
//   flags    = all clear
//   memory   = byte at address A reads as the low byte of prf(seed, A)
//              until written
//
// External (unresolvable) calls are stubbed: rax := prf(seed, call_index),
// and each caller-saved register r in {rcx,rdx,rsi,rdi,r8..r11} gets
// prf(rax_value, gpr_index(r)). No memory events are recorded for the stub.

struct MemoryEvent {
    enum class Kind { read, write };
    Kind kind;
    std::uint64_t address;
    std::uint32_t size;  // bytes, 1/2/4/8
    std::uint64_t value; // zero-extended

    bool operator==(const MemoryEvent&) const = default;
};

enum class HaltReason { ret, instruction_limit, unsupported_instruction, fault };

std::string_view to_string(HaltReason reason);

struct ExecutionTrace {
    std::uint64_t final_rax = 0;
    std::uint64_t final_rsp = 0;
    std::uint64_t final_rbp = 0;
    std::array<std::uint64_t, 16> final_gpr{}; // full snapshot for diagnostics
    std::vector<MemoryEvent> events;
    std::uint64_t executed_count = 0;
    HaltReason halt_reason = HaltReason::ret;
};

struct RuntimeScore {
    bool rax_equal;
    bool stack_equal; // rsp and rbp both equal
    bool trace_equal; // memory event sequences identical
    double value;     // mean of the three indicators: 0, 1/3, 2/3 or 1
};

inline constexpr std::uint64_t kDefaultInstructionLimit = 2000;

// Runs f under the seeded initial state. Never throws for abnormal programs:
// instruction-limit overruns, unsupported mnemonics and arithmetic faults all
// end up in halt_reason.
ExecutionTrace execute(const AssemblyFunction& f, std::uint64_t seed,
                       std::uint64_t max_instructions = kDefaultInstructionLimit);

// The three-indicator comparison behind runtime_similarity, usable when the
// traces are already at hand.
RuntimeScore compare_traces(const ExecutionTrace& a, const ExecutionTrace& b);

// Executes a and b under the identical seed-derived state and compares the
// final rax, the stack registers, and the memory event sequences.
RuntimeScore runtime_similarity(const AssemblyFunction& a,
                                const AssemblyFunction& b, std::uint64_t seed,
                                std::uint64_t max_instructions = kDefaultInstructionLimit);

} // namespace asmsearch
