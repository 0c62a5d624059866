#include "asmsearch/emulator.hpp"
#include "asmsearch/parser.hpp"
#include "asmsearch/prf.hpp"

#include "support/equivalence_catalog.hpp"

#include <doctest.h>

#include <set>

using namespace asmsearch;

namespace {

AssemblyFunction parse(const char* text) { return parse_assembly(text); }

} // namespace

TEST_CASE("mov-ret forced semantics") {
    ExecutionTrace trace = execute(parse("mov rax, 5\nret"), 42);
    CHECK(trace.final_rax == 5);
    CHECK(trace.events.empty());
    CHECK(trace.halt_reason == HaltReason::ret);
    CHECK(trace.executed_count == 2);
}

TEST_CASE("instruction limit on infinite loop") {
    ExecutionTrace trace = execute(parse("self:\nnop\njmp self\nret"), 1);
    CHECK(trace.halt_reason == HaltReason::instruction_limit);
    CHECK(trace.executed_count == 2000);

    ExecutionTrace small = execute(parse("self:\njmp self"), 1, 100);
    CHECK(small.executed_count == 100);
}

TEST_CASE("store-load consistency and events") {
    ExecutionTrace trace =
        execute(parse("mov [rsp-8], rax\nmov rbx, [rsp-8]\nret"), 7);
    REQUIRE(trace.events.size() == 2);
    CHECK(trace.events[0].kind == MemoryEvent::Kind::write);
    CHECK(trace.events[1].kind == MemoryEvent::Kind::read);
    CHECK(trace.events[0].address == trace.events[1].address);
    CHECK(trace.events[0].size == 8);
    CHECK(trace.events[0].value == trace.events[1].value);
    std::uint64_t initial_rax = prf(7, 0);
    CHECK(trace.events[0].value == initial_rax);
    CHECK(trace.final_gpr[3] == initial_rax); // rbx got the loaded value
}

TEST_CASE("initial state is the documented prf expansion") {
    ExecutionTrace trace = execute(parse("ret"), 99);
    for (int i = 0; i < 16; ++i) {
        if (i == 4 || i == 5)
            continue; // stack registers overridden
        CHECK(trace.final_gpr[i] == prf(99, static_cast<std::uint64_t>(i)));
    }
    std::uint64_t stack_base = prf(99, 16) & 0x00007ffffffffff0ULL;
    CHECK(trace.final_rsp == stack_base);
    CHECK(trace.final_rbp == stack_base);
    CHECK(trace.final_rsp % 16 == 0);
}

TEST_CASE("lazy memory initialization is deterministic") {
    auto f = parse("mov rbx, [rsp+64]\nmov rax, [rsp+64]\nret");
    ExecutionTrace trace = execute(f, 5);
    REQUIRE(trace.events.size() == 2);
    CHECK(trace.events[0].value == trace.events[1].value);
    CHECK(trace.final_rax == trace.final_gpr[3]);
    // byte-level contract: first byte equals low byte of prf(seed, addr)
    std::uint64_t addr = trace.events[0].address;
    CHECK((trace.events[0].value & 0xff) ==
          (prf(5, addr) & 0xff));
}

TEST_CASE("push pop keep rsp balanced") {
    ExecutionTrace trace = execute(parse("push rbx\npush rcx\npop rcx\npop rbx\nret"), 3);
    std::uint64_t stack_base = prf(3, 16) & 0x00007ffffffffff0ULL;
    CHECK(trace.final_rsp == stack_base);
    CHECK(trace.events.size() == 4);
}

TEST_CASE("division by zero faults") {
    ExecutionTrace trace = execute(parse("xor rcx, rcx\nmov rax, 8\ncqo\nidiv rcx\nret"), 11);
    CHECK(trace.halt_reason == HaltReason::fault);
}

TEST_CASE("division computes quotient and remainder") {
    ExecutionTrace trace =
        execute(parse("mov rax, 17\nxor rdx, rdx\nmov rcx, 5\ndiv rcx\nret"), 1);
    CHECK(trace.final_rax == 3);
    CHECK(trace.final_gpr[2] == 2);

    ExecutionTrace negative = execute(
        parse("mov rax, -17\ncqo\nmov rcx, 5\nidiv rcx\nret"), 1);
    CHECK(static_cast<std::int64_t>(negative.final_rax) == -3);
    CHECK(static_cast<std::int64_t>(negative.final_gpr[2]) == -2);
}

TEST_CASE("unsupported mnemonic halts instead of erroring") {
    ExecutionTrace trace = execute(parse("cpuid\nret"), 2);
    CHECK(trace.halt_reason == HaltReason::unsupported_instruction);
    CHECK(trace.executed_count == 1);
}

TEST_CASE("32-bit writes zero-extend") {
    ExecutionTrace trace = execute(parse("mov rax, -1\nmov eax, 7\nret"), 2);
    CHECK(trace.final_rax == 7);

    ExecutionTrace merged = execute(parse("mov rax, -1\nmov al, 0\nret"), 2);
    CHECK(merged.final_rax == 0xffffffffffffff00ULL);

    ExecutionTrace high = execute(parse("mov rax, 0\nmov ah, 2\nret"), 2);
    CHECK(high.final_rax == 0x200);
}

TEST_CASE("sub-register flag widths") {
    // 32-bit overflow wraps at 2^32: eax = 0xffffffff + 1 -> 0, ZF set
    auto f = parse("mov eax, -1\nadd eax, 1\nje wrapped\nmov rax, 1\nret\nwrapped:\nmov rax, 2\nret");
    CHECK(execute(f, 9).final_rax == 2);
}

TEST_CASE("conditional branches follow flags") {
    struct Case {
        const char* text;
        std::uint64_t expected;
    };
    const Case cases[] = {
        {"mov rax, 3\ncmp rax, 5\njl less\nmov rax, 0\nret\nless:\nmov rax, 1\nret", 1},
        {"mov rax, 7\ncmp rax, 5\njg greater\nmov rax, 0\nret\ngreater:\nmov rax, 1\nret", 1},
        {"mov rax, -1\ncmp rax, 1\njb below\nmov rax, 0\nret\nbelow:\nmov rax, 1\nret", 0}, // unsigned: huge
        {"mov rax, -1\ncmp rax, 1\nja above\nmov rax, 0\nret\nabove:\nmov rax, 1\nret", 1},
        {"mov rax, -5\ntest rax, rax\njs neg\nmov rax, 0\nret\nneg:\nmov rax, 1\nret", 1},
        {"mov rax, 5\ncmp rax, 5\njle le\nmov rax, 0\nret\nle:\nmov rax, 1\nret", 1},
        {"mov rax, 5\ncmp rax, 5\njae ae\nmov rax, 0\nret\nae:\nmov rax, 1\nret", 1},
    };
    for (const Case& c : cases)
        CHECK(execute(parse(c.text), 17).final_rax == c.expected);
}

TEST_CASE("internal call and ret resume execution") {
    auto f = parse(
        "main:\nmov rbx, 5\ncall helper\nadd rax, 1\nret\n"
        "helper:\nmov rax, rbx\nadd rax, 10\nret");
    ExecutionTrace trace = execute(f, 21);
    CHECK(trace.final_rax == 16);
    CHECK(trace.halt_reason == HaltReason::ret);
    // call pushes the return index, ret reads it back
    REQUIRE(trace.events.size() == 2);
    CHECK(trace.events[0].kind == MemoryEvent::Kind::write);
    CHECK(trace.events[0].value == 2);
    CHECK(trace.events[1].kind == MemoryEvent::Kind::read);
}

TEST_CASE("external call stub is deterministic and clobbers caller-saved") {
    auto f = parse("call memcpy\nret");
    ExecutionTrace t1 = execute(f, 33);
    ExecutionTrace t2 = execute(f, 33);
    CHECK(t1.final_rax == t2.final_rax);
    CHECK(t1.events.empty());
    std::uint64_t site_key = prf(33, 0);
    CHECK(t1.final_rax == site_key);
    CHECK(t1.final_gpr[1] == prf(site_key, 1));  // rcx
    CHECK(t1.final_gpr[11] == prf(site_key, 11)); // r11
    // callee-saved rbx untouched
    CHECK(t1.final_gpr[3] == prf(33, 3));
}

TEST_CASE("execute is deterministic across runs") {
    auto f = parse_assembly(
        "f:\nmov rcx, 10\nloop:\nadd rax, rcx\nmov [rsp-8], rax\nmov rdx, "
        "[rsp-8]\ndec rcx\njnz loop\nret");
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        ExecutionTrace a = execute(f, seed);
        ExecutionTrace b = execute(f, seed);
        CHECK(a.final_rax == b.final_rax);
        CHECK(a.final_gpr == b.final_gpr);
        CHECK(a.events == b.events);
        CHECK(a.executed_count == b.executed_count);
    }
}

TEST_CASE("seed sensitivity of uninitialized register reads") {
    auto f = parse("mov rax, rbx\nret");
    std::set<std::uint64_t> values;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        values.insert(execute(f, seed).final_rax);
    CHECK(values.size() >= 95);
}

TEST_CASE("self similarity is exactly 1") {
    const char* programs[] = {
        "mov rax, 5\nret",
        "self:\njmp self",
        "cpuid",
        "xor rcx, rcx\nidiv rcx",
        "mov [rsp-8], rax\nmov rbx, [rsp-8]\nret",
    };
    for (const char* text : programs) {
        auto f = parse(text);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            RuntimeScore score = runtime_similarity(f, f, seed);
            CHECK(score.value == 1.0);
            CHECK(score.rax_equal);
            CHECK(score.stack_equal);
            CHECK(score.trace_equal);
        }
    }
}

TEST_CASE("runtime similarity forced 2/3 case") {
    auto a = parse("mov rax, 5\nret");
    auto b = parse("mov rax, 6\nret");
    RuntimeScore score = runtime_similarity(a, b, 4);
    CHECK_FALSE(score.rax_equal);
    CHECK(score.stack_equal);
    CHECK(score.trace_equal);
    CHECK(score.value == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fig4 raw encodings agree iff truncation does not bite") {
    // rdi = 8*(rax+1) via 32-bit lea + shl versus a 64-bit scaled-index lea;
    // equivalent exactly when rax+1 fits in 32 bits.
    auto a = parse("lea edi, [rax+1]\nshl rdi, 3\nmov rax, rdi\nret");
    auto b = parse("lea rdi, [rax*8+8]\nmov rax, rdi\nret");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::uint64_t initial_rax = prf(seed, 0);
        bool truncation_bites = initial_rax + 1 > 0xffffffffULL;
        RuntimeScore score = runtime_similarity(a, b, seed);
        if (truncation_bites) {
            CHECK_FALSE(score.rax_equal);
            CHECK(score.value == doctest::Approx(2.0 / 3.0));
        } else {
            CHECK(score.value == 1.0);
        }
    }
}

TEST_CASE("instruction limit monotonicity") {
    const char* programs[] = {
        "self:\nadd rax, 1\njmp self",
        "mov rcx, 400\nloop:\ndec rcx\njnz loop\nret",
        "mov rax, 1\nret",
    };
    for (const char* text : programs) {
        auto f = parse(text);
        CHECK(execute(f, 3, 2000).executed_count >=
              execute(f, 3, 100).executed_count);
    }
}

TEST_CASE("equivalence catalog sanity") {
    // every catalog pair parses; the full 8-of-10-seeds gate runs in the
    // acceptance suite
    for (const auto& pair : testsupport::kEquivalencePairs) {
        auto a = parse(pair.a);
        auto b = parse(pair.b);
        auto m = parse(pair.mutated);
        RuntimeScore same = runtime_similarity(a, b, 1234);
        RuntimeScore diff = runtime_similarity(a, m, 1234);
        INFO(pair.name);
        CHECK(same.value == 1.0);
        CHECK(diff.value < 1.0);
    }
}
