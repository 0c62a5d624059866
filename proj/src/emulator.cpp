#include "asmsearch/emulator.hpp"
#include "asmsearch/prf.hpp"

#include <optional>
#include <unordered_map>

namespace asmsearch {

std::string_view to_string(HaltReason reason) {
    switch (reason) {
    case HaltReason::ret:
        return "ret";
    case HaltReason::instruction_limit:
        return "instruction_limit";
    case HaltReason::unsupported_instruction:
        return "unsupported_instruction";
    case HaltReason::fault:
        return "fault";
    }
    return "?";
}

namespace {

enum class Op {
    mov, movzx, movsx, lea,
    add, sub, imul, mul, idiv, div_,
    inc, dec, neg, not_,
    and_, or_, xor_,
    shl, shr, sar,
    cmp, test,
    push, pop,
    jmp, jcc, call, ret,
    nop, cdq, cqo,
    unsupported,
};

enum class Cond { e, ne, l, le, g, ge, b, be, a, ae, s, ns };

struct OpInfo {
    Op op;
    Cond cond; // meaningful for Op::jcc only
};

const std::unordered_map<std::string_view, OpInfo>& op_table() {
    static const auto* table = [] {
        auto* t = new std::unordered_map<std::string_view, OpInfo>{
            {"mov", {Op::mov, {}}},       {"movzx", {Op::movzx, {}}},
            {"movsx", {Op::movsx, {}}},   {"movsxd", {Op::movsx, {}}},
            {"lea", {Op::lea, {}}},       {"add", {Op::add, {}}},
            {"sub", {Op::sub, {}}},       {"imul", {Op::imul, {}}},
            {"mul", {Op::mul, {}}},       {"idiv", {Op::idiv, {}}},
            {"div", {Op::div_, {}}},      {"inc", {Op::inc, {}}},
            {"dec", {Op::dec, {}}},       {"neg", {Op::neg, {}}},
            {"not", {Op::not_, {}}},      {"and", {Op::and_, {}}},
            {"or", {Op::or_, {}}},        {"xor", {Op::xor_, {}}},
            {"shl", {Op::shl, {}}},       {"shr", {Op::shr, {}}},
            {"sar", {Op::sar, {}}},       {"cmp", {Op::cmp, {}}},
            {"test", {Op::test, {}}},     {"push", {Op::push, {}}},
            {"pop", {Op::pop, {}}},       {"jmp", {Op::jmp, {}}},
            {"call", {Op::call, {}}},     {"ret", {Op::ret, {}}},
            {"nop", {Op::nop, {}}},       {"cdq", {Op::cdq, {}}},
            {"cqo", {Op::cqo, {}}},
            {"je", {Op::jcc, Cond::e}},   {"jz", {Op::jcc, Cond::e}},
            {"jne", {Op::jcc, Cond::ne}}, {"jnz", {Op::jcc, Cond::ne}},
            {"jl", {Op::jcc, Cond::l}},   {"jle", {Op::jcc, Cond::le}},
            {"jg", {Op::jcc, Cond::g}},   {"jge", {Op::jcc, Cond::ge}},
            {"jb", {Op::jcc, Cond::b}},   {"jbe", {Op::jcc, Cond::be}},
            {"ja", {Op::jcc, Cond::a}},   {"jae", {Op::jcc, Cond::ae}},
            {"js", {Op::jcc, Cond::s}},   {"jns", {Op::jcc, Cond::ns}},
        };
        return t;
    }();
    return *table;
}

constexpr std::uint64_t width_mask(int bits) {
    return bits >= 64 ? ~0ULL : (1ULL << bits) - 1;
}

constexpr std::uint64_t sign_bit(int bits) { return 1ULL << (bits - 1); }

constexpr std::uint64_t sign_extend(std::uint64_t v, int bits) {
    if (bits >= 64)
        return v;
    std::uint64_t m = width_mask(bits);
    v &= m;
    return (v & sign_bit(bits)) ? (v | ~m) : v;
}

// Pre-resolved operand: register lookups and label targets done once.
struct DecodedReg {
    int index;
    int width;
    bool high_byte;
};

struct DecodedMem {
    std::optional<DecodedReg> base;
    std::optional<DecodedReg> index;
    int scale = 1;
    std::int64_t disp = 0;
    int size = 0; // bytes; 0 = unknown at decode time
};

struct DecodedOperand {
    enum class Kind { reg, imm, mem, target, none } kind = Kind::none;
    DecodedReg reg{};
    std::int64_t imm = 0;
    DecodedMem mem{};
    std::int64_t target = -1; // instruction index; -1 = external symbol
};

struct DecodedInsn {
    Op op = Op::unsupported;
    Cond cond{};
    DecodedOperand ops[3];
    int n_ops = 0;
    int width = 64; // operand width in bits for ALU/flag purposes
};

struct Flags {
    bool zf = false, sf = false, cf = false, of = false;
};

class Machine {
  public:
    Machine(const AssemblyFunction& f, std::uint64_t seed,
            std::uint64_t max_instructions)
        : seed_(seed), limit_(max_instructions) {
        decode(f);
        for (int i = 0; i < 16; ++i)
            gpr_[i] = prf(seed_, static_cast<std::uint64_t>(i));
        std::uint64_t stack_base = prf(seed_, 16) & 0x00007ffffffffff0ULL;
        gpr_[4] = stack_base; // rsp
        gpr_[5] = stack_base; // rbp
    }

    ExecutionTrace run() {
        HaltReason reason = HaltReason::fault;
        while (true) {
            if (executed_ >= limit_) {
                reason = HaltReason::instruction_limit;
                break;
            }
            if (rip_ < 0 || rip_ >= static_cast<std::int64_t>(program_.size())) {
                reason = HaltReason::fault; // ran off the instruction stream
                break;
            }
            const DecodedInsn& insn = program_[static_cast<std::size_t>(rip_)];
            ++executed_;
            std::optional<HaltReason> halted = step(insn);
            if (halted) {
                reason = *halted;
                break;
            }
        }
        ExecutionTrace trace;
        trace.final_gpr = gpr_;
        trace.final_rax = gpr_[0];
        trace.final_rsp = gpr_[4];
        trace.final_rbp = gpr_[5];
        trace.events = std::move(events_);
        trace.executed_count = executed_;
        trace.halt_reason = reason;
        return trace;
    }

  private:
    void decode(const AssemblyFunction& f) {
        program_.reserve(f.instructions.size());
        for (const Instruction& insn : f.instructions) {
            DecodedInsn d;
            auto it = op_table().find(insn.mnemonic);
            if (it != op_table().end() &&
                insn.operands.size() <= 3) {
                d.op = it->second.op;
                d.cond = it->second.cond;
                bool ok = true;
                for (const Operand& src : insn.operands) {
                    DecodedOperand& dst = d.ops[d.n_ops++];
                    bool is_branch_slot =
                        (d.op == Op::jmp || d.op == Op::jcc || d.op == Op::call) &&
                        d.n_ops == 1;
                    ok = ok && decode_operand(src, f, is_branch_slot, dst);
                }
                if (ok)
                    d.width = infer_width(d);
                else
                    d.op = Op::unsupported;
            }
            program_.push_back(d);
        }
    }

    static bool decode_operand(const Operand& src, const AssemblyFunction& f,
                               bool branch_slot, DecodedOperand& out) {
        if (const auto* reg = std::get_if<RegisterOperand>(&src)) {
            const RegisterInfo* info = lookup_register(reg->name);
            if (info == nullptr || info->gpr_index == kRipIndex)
                return false;
            out.kind = DecodedOperand::Kind::reg;
            out.reg = {info->gpr_index, info->width, info->high_byte};
            return true;
        }
        if (const auto* imm = std::get_if<ImmediateOperand>(&src)) {
            if (branch_slot)
                return false; // numeric branch targets are not instruction indices
            out.kind = DecodedOperand::Kind::imm;
            out.imm = imm->value;
            return true;
        }
        if (const auto* mem = std::get_if<MemoryOperand>(&src)) {
            out.kind = DecodedOperand::Kind::mem;
            auto resolve = [](const std::optional<RegisterOperand>& r,
                              std::optional<DecodedReg>& slot) {
                if (!r)
                    return true;
                const RegisterInfo* info = lookup_register(r->name);
                if (info == nullptr || info->gpr_index == kRipIndex)
                    return false; // rip-relative addressing is not emulated
                slot = DecodedReg{info->gpr_index, info->width, info->high_byte};
                return true;
            };
            if (!resolve(mem->base, out.mem.base) ||
                !resolve(mem->index, out.mem.index))
                return false;
            out.mem.scale = mem->scale;
            out.mem.disp = mem->displacement;
            out.mem.size = mem->size_hint;
            return true;
        }
        const auto& label = std::get<LabelRefOperand>(src);
        if (!branch_slot)
            return false; // symbolic data operands are not emulated
        out.kind = DecodedOperand::Kind::target;
        auto it = f.labels.find(label.symbol);
        out.target = it == f.labels.end()
                         ? -1
                         : static_cast<std::int64_t>(it->second);
        return true;
    }

    // Operand width: first register operand wins, then an explicit memory size
    // hint; bare immediate/memory forms default to 64-bit.
    static int infer_width(DecodedInsn& d) {
        int width = 0;
        for (int i = 0; i < d.n_ops; ++i)
            if (d.ops[i].kind == DecodedOperand::Kind::reg) {
                width = d.ops[i].reg.width;
                break;
            }
        if (width == 0)
            for (int i = 0; i < d.n_ops; ++i)
                if (d.ops[i].kind == DecodedOperand::Kind::mem &&
                    d.ops[i].mem.size != 0) {
                    width = d.ops[i].mem.size * 8;
                    break;
                }
        if (width == 0)
            width = 64;
        for (int i = 0; i < d.n_ops; ++i)
            if (d.ops[i].kind == DecodedOperand::Kind::mem &&
                d.ops[i].mem.size == 0)
                d.ops[i].mem.size = width / 8;
        return width;
    }

    std::uint8_t mem_byte(std::uint64_t addr) {
        auto it = memory_.find(addr);
        if (it != memory_.end())
            return it->second;
        return static_cast<std::uint8_t>(prf(seed_, addr)); // lazy init
    }

    std::uint64_t mem_read(std::uint64_t addr, int size) {
        std::uint64_t v = 0;
        for (int i = 0; i < size; ++i)
            v |= static_cast<std::uint64_t>(mem_byte(addr + i)) << (8 * i);
        events_.push_back({MemoryEvent::Kind::read, addr,
                           static_cast<std::uint32_t>(size), v});
        return v;
    }

    void mem_write(std::uint64_t addr, int size, std::uint64_t value) {
        std::uint64_t v = size >= 8 ? value : (value & width_mask(size * 8));
        for (int i = 0; i < size; ++i)
            memory_[addr + i] = static_cast<std::uint8_t>(v >> (8 * i));
        events_.push_back({MemoryEvent::Kind::write, addr,
                           static_cast<std::uint32_t>(size), v});
    }

    std::uint64_t get_reg(const DecodedReg& r) const {
        std::uint64_t v = gpr_[r.index];
        if (r.high_byte)
            return (v >> 8) & 0xff;
        return v & width_mask(r.width);
    }

    void set_reg(const DecodedReg& r, std::uint64_t value) {
        std::uint64_t& slot = gpr_[r.index];
        switch (r.width) {
        case 64:
            slot = value;
            break;
        case 32:
            slot = value & 0xffffffffULL; // 32-bit writes zero-extend
            break;
        case 16:
            slot = (slot & ~0xffffULL) | (value & 0xffffULL);
            break;
        case 8:
            if (r.high_byte)
                slot = (slot & ~0xff00ULL) | ((value & 0xffULL) << 8);
            else
                slot = (slot & ~0xffULL) | (value & 0xffULL);
            break;
        }
    }

    std::uint64_t effective_address(const DecodedMem& m) const {
        std::uint64_t addr = static_cast<std::uint64_t>(m.disp);
        if (m.base)
            addr += get_reg_full(*m.base);
        if (m.index)
            addr += get_reg_full(*m.index) * static_cast<std::uint64_t>(m.scale);
        return addr;
    }

    // Address components use the named sub-register value zero/sign rules of
    // plain reads (a 32-bit base contributes its 32-bit value).
    std::uint64_t get_reg_full(const DecodedReg& r) const { return get_reg(r); }

    // Reads an operand's value at instruction width.
    std::uint64_t read_value(const DecodedOperand& op, int width) {
        switch (op.kind) {
        case DecodedOperand::Kind::reg:
            return get_reg(op.reg);
        case DecodedOperand::Kind::imm:
            return static_cast<std::uint64_t>(op.imm) & width_mask(width);
        case DecodedOperand::Kind::mem:
            return mem_read(effective_address(op.mem), op.mem.size);
        default:
            return 0;
        }
    }

    void write_value(const DecodedOperand& op, int width, std::uint64_t value) {
        if (op.kind == DecodedOperand::Kind::reg) {
            set_reg(op.reg, value);
        } else if (op.kind == DecodedOperand::Kind::mem) {
            mem_write(effective_address(op.mem), op.mem.size, value);
        }
        (void)width;
    }

    void set_zsf(std::uint64_t result, int width) {
        std::uint64_t r = result & width_mask(width);
        flags_.zf = r == 0;
        flags_.sf = (r & sign_bit(width)) != 0;
    }

    std::uint64_t do_add(std::uint64_t a, std::uint64_t b, int width,
                         bool update_cf = true) {
        std::uint64_t m = width_mask(width);
        a &= m;
        b &= m;
        std::uint64_t r = (a + b) & m;
        if (update_cf)
            flags_.cf = r < a;
        flags_.of = ((~(a ^ b) & (a ^ r)) & sign_bit(width)) != 0;
        set_zsf(r, width);
        return r;
    }

    std::uint64_t do_sub(std::uint64_t a, std::uint64_t b, int width,
                         bool update_cf = true) {
        std::uint64_t m = width_mask(width);
        a &= m;
        b &= m;
        std::uint64_t r = (a - b) & m;
        if (update_cf)
            flags_.cf = a < b;
        flags_.of = (((a ^ b) & (a ^ r)) & sign_bit(width)) != 0;
        set_zsf(r, width);
        return r;
    }

    std::uint64_t do_logic(char kind, std::uint64_t a, std::uint64_t b,
                           int width) {
        std::uint64_t r = kind == '&' ? (a & b) : kind == '|' ? (a | b) : (a ^ b);
        r &= width_mask(width);
        flags_.cf = false;
        flags_.of = false;
        set_zsf(r, width);
        return r;
    }

    bool cond_holds(Cond c) const {
        switch (c) {
        case Cond::e:  return flags_.zf;
        case Cond::ne: return !flags_.zf;
        case Cond::l:  return flags_.sf != flags_.of;
        case Cond::le: return flags_.zf || flags_.sf != flags_.of;
        case Cond::g:  return !flags_.zf && flags_.sf == flags_.of;
        case Cond::ge: return flags_.sf == flags_.of;
        case Cond::b:  return flags_.cf;
        case Cond::be: return flags_.cf || flags_.zf;
        case Cond::a:  return !flags_.cf && !flags_.zf;
        case Cond::ae: return !flags_.cf;
        case Cond::s:  return flags_.sf;
        case Cond::ns: return !flags_.sf;
        }
        return false;
    }

    void push64(std::uint64_t value) {
        gpr_[4] -= 8;
        mem_write(gpr_[4], 8, value);
    }

    std::uint64_t pop64() {
        std::uint64_t v = mem_read(gpr_[4], 8);
        gpr_[4] += 8;
        return v;
    }

    // Returns a halt reason when execution ends on this instruction.
    std::optional<HaltReason> step(const DecodedInsn& insn) {
        const int w = insn.width;
        std::int64_t next = rip_ + 1;
        switch (insn.op) {
        case Op::nop:
            break;
        case Op::mov:
            write_value(insn.ops[0], w, read_value(insn.ops[1], w));
            break;
        case Op::movzx:
        case Op::movsx: {
            const DecodedOperand& src = insn.ops[1];
            int src_width;
            if (src.kind == DecodedOperand::Kind::reg)
                src_width = src.reg.width;
            else if (src.kind == DecodedOperand::Kind::mem && src.mem.size != 0 &&
                     src.mem.size * 8 != insn.ops[0].reg.width)
                src_width = src.mem.size * 8;
            else
                return HaltReason::unsupported_instruction; // size unknowable
            std::uint64_t v = src.kind == DecodedOperand::Kind::reg
                                  ? get_reg(src.reg)
                                  : mem_read(effective_address(src.mem),
                                             src_width / 8);
            if (insn.op == Op::movsx)
                v = sign_extend(v, src_width);
            if (insn.ops[0].kind != DecodedOperand::Kind::reg)
                return HaltReason::unsupported_instruction;
            set_reg(insn.ops[0].reg, v);
            break;
        }
        case Op::lea: {
            if (insn.ops[0].kind != DecodedOperand::Kind::reg ||
                insn.ops[1].kind != DecodedOperand::Kind::mem)
                return HaltReason::unsupported_instruction;
            set_reg(insn.ops[0].reg, effective_address(insn.ops[1].mem));
            break;
        }
        case Op::add: {
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t b = read_value(insn.ops[1], w);
            write_value(insn.ops[0], w, do_add(a, b, w));
            break;
        }
        case Op::sub: {
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t b = read_value(insn.ops[1], w);
            write_value(insn.ops[0], w, do_sub(a, b, w));
            break;
        }
        case Op::cmp: {
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t b = read_value(insn.ops[1], w);
            do_sub(a, b, w);
            break;
        }
        case Op::test: {
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t b = read_value(insn.ops[1], w);
            do_logic('&', a, b, w);
            break;
        }
        case Op::and_:
        case Op::or_:
        case Op::xor_: {
            char kind = insn.op == Op::and_ ? '&' : insn.op == Op::or_ ? '|' : '^';
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t b = read_value(insn.ops[1], w);
            write_value(insn.ops[0], w, do_logic(kind, a, b, w));
            break;
        }
        case Op::inc:
        case Op::dec: {
            std::uint64_t a = read_value(insn.ops[0], w);
            std::uint64_t r = insn.op == Op::inc ? do_add(a, 1, w, false)
                                                 : do_sub(a, 1, w, false);
            write_value(insn.ops[0], w, r);
            break;
        }
        case Op::neg: {
            std::uint64_t a = read_value(insn.ops[0], w) & width_mask(w);
            std::uint64_t r = (0 - a) & width_mask(w);
            flags_.cf = a != 0;
            flags_.of = a == sign_bit(w);
            set_zsf(r, w);
            write_value(insn.ops[0], w, r);
            break;
        }
        case Op::not_: {
            std::uint64_t a = read_value(insn.ops[0], w);
            write_value(insn.ops[0], w, ~a & width_mask(w));
            break; // not does not touch flags
        }
        case Op::shl:
        case Op::shr:
        case Op::sar: {
            std::uint64_t a = read_value(insn.ops[0], w) & width_mask(w);
            std::uint64_t count = read_value(insn.ops[1], 8);
            count &= (w == 64) ? 63 : 31;
            if (count == 0)
                break; // zero shifts leave flags alone
            std::uint64_t r;
            if (insn.op == Op::shl) {
                flags_.cf =
                    count <= static_cast<std::uint64_t>(w) &&
                    ((a >> (w - count)) & 1) != 0;
                r = (count >= static_cast<std::uint64_t>(w)) ? 0
                                                             : (a << count);
                r &= width_mask(w);
                flags_.of = (((r & sign_bit(w)) != 0) != flags_.cf);
            } else if (insn.op == Op::shr) {
                flags_.cf = count <= 64 && ((a >> (count - 1)) & 1) != 0;
                r = (count >= static_cast<std::uint64_t>(w)) ? 0 : (a >> count);
                flags_.of = (a & sign_bit(w)) != 0;
            } else {
                std::uint64_t s = sign_extend(a, w);
                std::int64_t sa = static_cast<std::int64_t>(s);
                std::uint64_t c = count >= static_cast<std::uint64_t>(w)
                                      ? static_cast<std::uint64_t>(w - 1)
                                      : count;
                flags_.cf = ((static_cast<std::uint64_t>(sa) >> (c - 1)) & 1) != 0;
                r = static_cast<std::uint64_t>(sa >> c) & width_mask(w);
                flags_.of = false;
            }
            set_zsf(r, w);
            write_value(insn.ops[0], w, r);
            break;
        }
        case Op::imul: {
            if (insn.n_ops == 1) {
                // rdx:rax = rax * src (signed)
                std::int64_t a = static_cast<std::int64_t>(
                    sign_extend(gpr_[0] & width_mask(w), w));
                std::int64_t b = static_cast<std::int64_t>(
                    sign_extend(read_value(insn.ops[0], w), w));
                __int128 full = static_cast<__int128>(a) * b;
                write_mul_result(static_cast<unsigned __int128>(full), w);
                __int128 lo = static_cast<__int128>(static_cast<std::int64_t>(
                    sign_extend(static_cast<std::uint64_t>(full) & width_mask(w), w)));
                flags_.cf = flags_.of = full != lo;
            } else {
                std::uint64_t a = read_value(insn.ops[insn.n_ops == 3 ? 1 : 0], w);
                std::uint64_t b = insn.n_ops == 3
                                      ? (static_cast<std::uint64_t>(insn.ops[2].imm) &
                                         width_mask(w))
                                      : read_value(insn.ops[1], w);
                __int128 full =
                    static_cast<__int128>(
                        static_cast<std::int64_t>(sign_extend(a, w))) *
                    static_cast<std::int64_t>(sign_extend(b, w));
                std::uint64_t r = static_cast<std::uint64_t>(full) & width_mask(w);
                flags_.cf = flags_.of =
                    full != static_cast<__int128>(
                                static_cast<std::int64_t>(sign_extend(r, w)));
                set_zsf(r, w);
                write_value(insn.ops[0], w, r);
            }
            break;
        }
        case Op::mul: {
            std::uint64_t a = gpr_[0] & width_mask(w);
            std::uint64_t b = read_value(insn.ops[0], w) & width_mask(w);
            unsigned __int128 full =
                static_cast<unsigned __int128>(a) * b;
            write_mul_result(full, w);
            bool hi = (full >> w) != 0;
            flags_.cf = flags_.of = hi;
            break;
        }
        case Op::idiv:
        case Op::div_: {
            std::uint64_t divisor = read_value(insn.ops[0], w) & width_mask(w);
            if (divisor == 0)
                return HaltReason::fault; // #DE
            if (!do_divide(divisor, w, insn.op == Op::idiv))
                return HaltReason::fault; // quotient overflow
            break;
        }
        case Op::cdq: {
            std::uint64_t edx = (gpr_[0] & 0x80000000ULL) ? 0xffffffffULL : 0;
            gpr_[2] = edx; // 32-bit write zero-extends rdx
            break;
        }
        case Op::cqo:
            gpr_[2] = (gpr_[0] & 0x8000000000000000ULL) ? ~0ULL : 0;
            break;
        case Op::push: {
            std::uint64_t v =
                insn.ops[0].kind == DecodedOperand::Kind::imm
                    ? static_cast<std::uint64_t>(insn.ops[0].imm)
                    : read_value(insn.ops[0], 64);
            push64(v);
            break;
        }
        case Op::pop: {
            std::uint64_t v = pop64();
            write_value(insn.ops[0], 64, v);
            break;
        }
        case Op::jmp:
            if (insn.ops[0].kind != DecodedOperand::Kind::target ||
                insn.ops[0].target < 0)
                return HaltReason::unsupported_instruction;
            next = insn.ops[0].target;
            break;
        case Op::jcc:
            if (insn.ops[0].kind != DecodedOperand::Kind::target ||
                insn.ops[0].target < 0)
                return HaltReason::unsupported_instruction;
            if (cond_holds(insn.cond))
                next = insn.ops[0].target;
            break;
        case Op::call: {
            if (insn.ops[0].kind != DecodedOperand::Kind::target)
                return HaltReason::unsupported_instruction;
            if (insn.ops[0].target >= 0) {
                push64(static_cast<std::uint64_t>(rip_ + 1));
                ++call_depth_;
                next = insn.ops[0].target;
            } else {
                // external call: deterministic stub, no memory events
                std::uint64_t site_key =
                    prf(seed_, static_cast<std::uint64_t>(rip_));
                gpr_[0] = site_key; // rax
                for (int r : {1, 2, 6, 7, 8, 9, 10, 11}) // rcx rdx rsi rdi r8-r11
                    gpr_[r] = prf(site_key, static_cast<std::uint64_t>(r));
            }
            break;
        }
        case Op::ret: {
            if (call_depth_ == 0)
                return HaltReason::ret;
            std::uint64_t v = pop64();
            if (insn.n_ops == 1 && insn.ops[0].kind == DecodedOperand::Kind::imm)
                gpr_[4] += static_cast<std::uint64_t>(insn.ops[0].imm);
            --call_depth_;
            if (v >= program_.size())
                return HaltReason::fault; // clobbered return slot
            next = static_cast<std::int64_t>(v);
            break;
        }
        case Op::unsupported:
            return HaltReason::unsupported_instruction;
        }
        rip_ = next;
        return std::nullopt;
    }

    void write_mul_result(unsigned __int128 full, int w) {
        std::uint64_t lo = static_cast<std::uint64_t>(full) & width_mask(w);
        std::uint64_t hi =
            static_cast<std::uint64_t>(full >> w) & width_mask(w);
        if (w == 8) {
            // ax = al * src
            gpr_[0] = (gpr_[0] & ~0xffffULL) | (lo & 0xff) | ((hi & 0xff) << 8);
        } else {
            set_reg({0, w, false}, lo); // rax/eax/ax
            set_reg({2, w, false}, hi); // rdx/edx/dx
        }
    }

    bool do_divide(std::uint64_t divisor, int w, bool is_signed) {
        if (w == 8) {
            std::uint64_t dividend = gpr_[0] & 0xffff; // ax
            if (is_signed) {
                std::int64_t dv = static_cast<std::int64_t>(sign_extend(dividend, 16));
                std::int64_t ds = static_cast<std::int64_t>(sign_extend(divisor, 8));
                std::int64_t q = dv / ds, r = dv % ds;
                if (q < -128 || q > 127)
                    return false;
                gpr_[0] = (gpr_[0] & ~0xffffULL) |
                          (static_cast<std::uint64_t>(q) & 0xff) |
                          ((static_cast<std::uint64_t>(r) & 0xff) << 8);
            } else {
                std::uint64_t q = dividend / divisor, r = dividend % divisor;
                if (q > 0xff)
                    return false;
                gpr_[0] = (gpr_[0] & ~0xffffULL) | (q & 0xff) | ((r & 0xff) << 8);
            }
            return true;
        }
        std::uint64_t lo = gpr_[0] & width_mask(w);
        std::uint64_t hi = gpr_[2] & width_mask(w);
        if (is_signed) {
            __int128 dividend =
                (static_cast<__int128>(static_cast<std::int64_t>(
                     sign_extend(hi, w)))
                 << w) |
                static_cast<__int128>(lo);
            __int128 ds = static_cast<std::int64_t>(sign_extend(divisor, w));
            if (dividend == static_cast<__int128>(1) << 127 && ds == -1)
                return false;
            __int128 q = dividend / ds, r = dividend % ds;
            __int128 qmin = -(static_cast<__int128>(1) << (w - 1));
            __int128 qmax = (static_cast<__int128>(1) << (w - 1)) - 1;
            if (q < qmin || q > qmax)
                return false;
            set_reg({0, w, false}, static_cast<std::uint64_t>(q) & width_mask(w));
            set_reg({2, w, false}, static_cast<std::uint64_t>(r) & width_mask(w));
        } else {
            unsigned __int128 dividend =
                (static_cast<unsigned __int128>(hi) << w) | lo;
            unsigned __int128 q = dividend / divisor, r = dividend % divisor;
            if (q > width_mask(w))
                return false;
            set_reg({0, w, false}, static_cast<std::uint64_t>(q));
            set_reg({2, w, false}, static_cast<std::uint64_t>(r));
        }
        return true;
    }

    std::uint64_t seed_;
    std::uint64_t limit_;
    std::vector<DecodedInsn> program_;
    std::array<std::uint64_t, 16> gpr_{};
    Flags flags_;
    std::unordered_map<std::uint64_t, std::uint8_t> memory_;
    std::vector<MemoryEvent> events_;
    std::int64_t rip_ = 0;
    std::uint64_t executed_ = 0;
    std::uint64_t call_depth_ = 0;
};

} // namespace

ExecutionTrace execute(const AssemblyFunction& f, std::uint64_t seed,
                       std::uint64_t max_instructions) {
    Machine machine(f, seed, max_instructions);
    return machine.run();
}

RuntimeScore compare_traces(const ExecutionTrace& a, const ExecutionTrace& b) {
    RuntimeScore score;
    score.rax_equal = a.final_rax == b.final_rax;
    score.stack_equal = a.final_rsp == b.final_rsp && a.final_rbp == b.final_rbp;
    score.trace_equal = a.events == b.events;
    score.value = (static_cast<int>(score.rax_equal) +
                   static_cast<int>(score.stack_equal) +
                   static_cast<int>(score.trace_equal)) /
                  3.0;
    return score;
}

RuntimeScore runtime_similarity(const AssemblyFunction& a,
                                const AssemblyFunction& b, std::uint64_t seed,
                                std::uint64_t max_instructions) {
    ExecutionTrace ta = execute(a, seed, max_instructions);
    ExecutionTrace tb = execute(b, seed, max_instructions);
    return compare_traces(ta, tb);
}

} // namespace asmsearch
