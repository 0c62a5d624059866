#include "asmsearch/parser.hpp"
#include "asmsearch/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace asmsearch {

namespace {

constexpr std::array<std::string_view, 16> kGpr64 = {
    "rax", "rcx", "rdx", "rbx", "rsp", "rbp", "rsi", "rdi",
    "r8",  "r9",  "r10", "r11", "r12", "r13", "r14", "r15"};
constexpr std::array<std::string_view, 16> kGpr32 = {
    "eax", "ecx", "edx", "ebx", "esp", "ebp", "esi", "edi",
    "r8d", "r9d", "r10d", "r11d", "r12d", "r13d", "r14d", "r15d"};
constexpr std::array<std::string_view, 16> kGpr16 = {
    "ax",  "cx",  "dx",  "bx",  "sp",  "bp",  "si",  "di",
    "r8w", "r9w", "r10w", "r11w", "r12w", "r13w", "r14w", "r15w"};
constexpr std::array<std::string_view, 16> kGpr8 = {
    "al",  "cl",  "dl",  "bl",  "spl", "bpl", "sil", "dil",
    "r8b", "r9b", "r10b", "r11b", "r12b", "r13b", "r14b", "r15b"};
constexpr std::array<std::string_view, 4> kGpr8High = {"ah", "ch", "dh", "bh"};

const std::unordered_map<std::string_view, RegisterInfo>& register_table() {
    static const auto* table = [] {
        auto* t = new std::unordered_map<std::string_view, RegisterInfo>;
        for (int i = 0; i < 16; ++i) {
            t->emplace(kGpr64[i], RegisterInfo{kGpr64[i], i, 64, false});
            t->emplace(kGpr32[i], RegisterInfo{kGpr32[i], i, 32, false});
            t->emplace(kGpr16[i], RegisterInfo{kGpr16[i], i, 16, false});
            t->emplace(kGpr8[i], RegisterInfo{kGpr8[i], i, 8, false});
        }
        for (int i = 0; i < 4; ++i)
            t->emplace(kGpr8High[i], RegisterInfo{kGpr8High[i], i, 8, true});
        t->emplace("rip", RegisterInfo{"rip", kRipIndex, 64, false});
        return t;
    }();
    return *table;
}

// Mnemonics with a fixed arity contract; everything else parses permissively.
struct Arity {
    int min;
    int max;
};

const std::unordered_map<std::string_view, Arity>& known_mnemonics() {
    static const auto* table = [] {
        auto* t = new std::unordered_map<std::string_view, Arity>;
        for (std::string_view m : {"ret"})
            t->emplace(m, Arity{0, 1});
        for (std::string_view m : {"nop", "cdq", "cqo"})
            t->emplace(m, Arity{0, 0});
        for (std::string_view m :
             {"push", "pop", "inc", "dec", "neg", "not", "mul", "idiv", "div",
              "jmp", "call", "je", "jne", "jz", "jnz", "jl", "jle", "jg", "jge",
              "jb", "jbe", "ja", "jae", "js", "jns"})
            t->emplace(m, Arity{1, 1});
        for (std::string_view m :
             {"mov", "movzx", "movsx", "movsxd", "lea", "add", "sub", "and",
              "or", "xor", "shl", "shr", "sar", "cmp", "test"})
            t->emplace(m, Arity{2, 2});
        t->emplace("imul", Arity{1, 3});
        return t;
    }();
    return *table;
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           c == '$' || c == '@' || c == '?';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Cuts a ";" comment, ignoring semicolons inside string literals.
std::string_view strip_comment(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote != 0) {
            if (c == '\\' && i + 1 < line.size())
                ++i;
            else if (c == quote)
                quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == ';') {
            return line.substr(0, i);
        }
    }
    return line;
}

bool parse_number(std::string_view s, std::int64_t& out) {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
        s = trim(s);
    }
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())))
        return false;
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s.remove_prefix(2);
    } else if (s.size() > 1 && (s.back() == 'h' || s.back() == 'H')) {
        base = 16;
        s.remove_suffix(1);
    }
    std::uint64_t mag = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), mag, base);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return false;
    out = neg ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
    return true;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !is_ident_start(s.front()))
        return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

// Splits an operand list on top-level commas (quotes and brackets respected).
std::vector<std::string_view> split_operands(std::string_view s) {
    std::vector<std::string_view> parts;
    char quote = 0;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (quote != 0) {
            if (c == '\\' && i + 1 < s.size())
                ++i;
            else if (c == quote)
                quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        } else if (c == ',' && depth == 0) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    std::string_view last = trim(s.substr(start));
    if (!last.empty() || !parts.empty())
        parts.push_back(last);
    return parts;
}

bool consume_keyword(std::string_view& s, std::string_view kw) {
    if (s.size() < kw.size())
        return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != kw[i])
            return false;
    std::string_view rest = s.substr(kw.size());
    if (!rest.empty() && is_ident_char(rest.front()))
        return false; // keyword must end at a word boundary
    s = trim(rest);
    return true;
}

int size_hint_bytes(std::string_view& s) {
    int bytes = 0;
    if (consume_keyword(s, "byte"))
        bytes = 1;
    else if (consume_keyword(s, "word"))
        bytes = 2;
    else if (consume_keyword(s, "dword"))
        bytes = 4;
    else if (consume_keyword(s, "qword"))
        bytes = 8;
    if (bytes != 0)
        consume_keyword(s, "ptr");
    return bytes;
}

constexpr std::array<std::string_view, 6> kSegments = {"cs", "ds", "es",
                                                       "fs", "gs", "ss"};

bool consume_segment(std::string_view& s) {
    for (std::string_view seg : kSegments) {
        if (s.size() > seg.size() && s.substr(0, seg.size()) == seg &&
            s[seg.size()] == ':') {
            s = trim(s.substr(seg.size() + 1));
            return true;
        }
    }
    return false;
}

bool parse_memory(std::string_view s, MemoryOperand& mem) {
    // [size ptr] [seg:] [disp] "[" base + index*scale + disp "]"
    mem = MemoryOperand{};
    mem.size_hint = size_hint_bytes(s);
    consume_segment(s);

    std::size_t open = s.find('[');
    if (open == std::string_view::npos || s.back() != ']')
        return false;
    std::string_view prefix = trim(s.substr(0, open));
    if (!prefix.empty()) { // IDA-style "8[rax*8]" leading displacement
        std::int64_t disp = 0;
        if (!parse_number(prefix, disp))
            return false;
        mem.displacement += disp;
    }
    std::string_view inner = trim(s.substr(open + 1, s.size() - open - 2));
    if (inner.empty())
        return false;

    // Split on top-level +/- into signed terms.
    std::vector<std::pair<int, std::string_view>> terms;
    int sign = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i == inner.size() || inner[i] == '+' || inner[i] == '-') {
            std::string_view term = trim(inner.substr(start, i - start));
            if (!term.empty())
                terms.emplace_back(sign, term);
            else if (i != inner.size() && !terms.empty())
                return false; // consecutive operators
            if (i < inner.size())
                sign = inner[i] == '-' ? -1 : 1;
            start = i + 1;
        }
    }
    if (terms.empty())
        return false;

    for (auto [term_sign, term] : terms) {
        std::int64_t num = 0;
        std::size_t star = term.find('*');
        if (star != std::string_view::npos) {
            std::string_view lhs = trim(term.substr(0, star));
            std::string_view rhs = trim(term.substr(star + 1));
            const RegisterInfo* reg = lookup_register(lhs);
            std::string_view reg_name = lhs, scale_text = rhs;
            if (reg == nullptr) {
                reg = lookup_register(rhs);
                reg_name = rhs;
                scale_text = lhs;
            }
            std::int64_t scale = 0;
            if (reg == nullptr || term_sign < 0 || mem.index.has_value() ||
                !parse_number(scale_text, scale))
                return false;
            if (scale != 1 && scale != 2 && scale != 4 && scale != 8)
                return false;
            mem.index = RegisterOperand{std::string(reg_name), reg->width};
            mem.scale = static_cast<int>(scale);
        } else if (const RegisterInfo* reg = lookup_register(term)) {
            if (term_sign < 0)
                return false;
            if (!mem.base.has_value())
                mem.base = RegisterOperand{std::string(term), reg->width};
            else if (!mem.index.has_value())
                mem.index = RegisterOperand{std::string(term), reg->width};
            else
                return false;
        } else if (parse_number(term, num)) {
            mem.displacement += term_sign * num;
        } else {
            return false;
        }
    }
    // Base-only scaled form "[rax*2]" leaves base empty on purpose.
    return true;
}

bool parse_operand_strict(std::string_view text, Operand& out) {
    std::string_view s = trim(text);
    if (s.empty())
        return false;
    if (s.front() == '"' || s.front() == '\'') {
        if (s.size() < 2 || s.back() != s.front())
            return false;
        out = LabelRefOperand{std::string(s)}; // string literal kept verbatim
        return true;
    }
    if (s.find('[') != std::string_view::npos) {
        MemoryOperand mem;
        if (!parse_memory(s, mem))
            return false;
        out = mem;
        return true;
    }
    // jump/address decorations
    consume_keyword(s, "short");
    if (consume_keyword(s, "near"))
        consume_keyword(s, "ptr");
    consume_keyword(s, "offset");

    if (const RegisterInfo* reg = lookup_register(s)) {
        if (reg->gpr_index == kRipIndex)
            return false; // rip is valid only as a memory base
        out = RegisterOperand{std::string(s), reg->width};
        return true;
    }
    std::int64_t value = 0;
    if (parse_number(s, value)) {
        out = ImmediateOperand{value};
        return true;
    }
    if (is_identifier(s)) {
        out = LabelRefOperand{std::string(s)};
        return true;
    }
    return false;
}

bool parse_label(std::string_view s, std::string_view& label,
                 std::string_view& rest) {
    if (s.empty() || !is_ident_start(s.front()))
        return false;
    std::size_t i = 1;
    while (i < s.size() && is_ident_char(s[i]))
        ++i;
    if (i >= s.size() || s[i] != ':')
        return false;
    label = s.substr(0, i);
    rest = trim(s.substr(i + 1));
    return true;
}

} // namespace

const RegisterInfo* lookup_register(std::string_view name) {
    const auto& table = register_table();
    auto it = table.find(name);
    return it == table.end() ? nullptr : &it->second;
}

AssemblyFunction parse_assembly(std::string_view text) {
    AssemblyFunction f;
    std::vector<std::string_view> pending_labels;
    bool name_fixed = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw_line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                           : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = trim(strip_comment(raw_line));
        std::string_view label, rest;
        while (parse_label(line, label, rest)) {
            pending_labels.push_back(label);
            line = rest;
        }
        if (line.empty())
            continue;
        if (line.front() == '.') // assembler directive
            continue;

        // mnemonic = leading identifier run
        std::size_t m_end = 0;
        while (m_end < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[m_end])) ||
                line[m_end] == '.'))
            ++m_end;
        if (m_end == 0)
            throw MalformedLine(line_no, "unparseable line: " + std::string(line));
        Instruction insn;
        insn.mnemonic = std::string(line.substr(0, m_end));
        std::transform(insn.mnemonic.begin(), insn.mnemonic.end(),
                       insn.mnemonic.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (m_end < line.size() &&
            !std::isspace(static_cast<unsigned char>(line[m_end])))
            throw MalformedLine(line_no,
                                "unparseable mnemonic: " + std::string(line));

        std::string_view operand_text = trim(line.substr(m_end));
        const auto& known = known_mnemonics();
        auto arity_it = known.find(insn.mnemonic);
        bool strict = arity_it != known.end();

        for (std::string_view part : split_operands(operand_text)) {
            Operand op;
            if (part.empty())
                throw MalformedLine(line_no, "empty operand: " + std::string(line));
            if (part.front() == '%' || part.front() == '$' ||
                part.front() == '(') // AT&T syntax, not merely unknown
                throw MalformedLine(line_no,
                                    "AT&T syntax operand '" + std::string(part) +
                                        "' in: " + std::string(line));
            if (parse_operand_strict(part, op)) {
                insn.operands.push_back(std::move(op));
            } else if (strict) {
                throw MalformedLine(line_no, "bad operand '" + std::string(part) +
                                                 "' in: " + std::string(line));
            } else {
                insn.operands.push_back(LabelRefOperand{std::string(part)});
            }
        }
        if (strict) {
            int n = static_cast<int>(insn.operands.size());
            if (n < arity_it->second.min || n > arity_it->second.max)
                throw MalformedLine(line_no, "operand count for " + insn.mnemonic +
                                                 ": " + std::string(line));
        }

        insn.raw_text = std::string(line);
        for (std::string_view l : pending_labels) {
            f.labels.emplace(std::string(l), f.instructions.size());
            if (!name_fixed && f.instructions.empty()) {
                f.name = std::string(l);
                name_fixed = true;
            }
        }
        pending_labels.clear();
        f.instructions.push_back(std::move(insn));
    }

    if (f.instructions.empty())
        throw EmptyFunction();
    // labels after the last instruction are dropped (pending_labels discarded)
    f.token_count = tokenize(f).size();
    return f;
}

std::string render(const AssemblyFunction& f) {
    std::string out;
    for (std::size_t i = 0; i < f.instructions.size(); ++i) {
        if (i == 0 && !f.name.empty() && f.labels.count(f.name) &&
            f.labels.at(f.name) == 0) {
            out += f.name;
            out += ":\n";
        }
        for (const auto& [label, idx] : f.labels) {
            if (idx == i && !(i == 0 && label == f.name)) {
                out += label;
                out += ":\n";
            }
        }
        out += "    ";
        out += f.instructions[i].raw_text;
        out += '\n';
    }
    return out;
}

} // namespace asmsearch
