#include "whtmlgate/wmls/bytecode.hpp"

#include <cstring>
#include <set>
#include <sstream>

#include "whtmlgate/utf8.hpp"

namespace whtmlgate::wmls {

namespace {

constexpr std::uint8_t kMagic[4] = {'W', 'B', 'C', '1'};
constexpr std::uint8_t kTagInteger = 0;
constexpr std::uint8_t kTagString = 1;

bool has_operand(std::uint8_t op) {
    switch (static_cast<Opcode>(op)) {
        case Opcode::ConstI:
        case Opcode::ConstS:
        case Opcode::Load:
        case Opcode::Store:
        case Opcode::Jmp:
        case Opcode::Jz:
        case Opcode::Call:
            return true;
        default:
            return false;
    }
}

const char* mnemonic(std::uint8_t op) {
    switch (static_cast<Opcode>(op)) {
        case Opcode::ConstI: return "CONST_I";
        case Opcode::ConstS: return "CONST_S";
        case Opcode::Load: return "LOAD";
        case Opcode::Store: return "STORE";
        case Opcode::Add: return "ADD";
        case Opcode::Sub: return "SUB";
        case Opcode::Mul: return "MUL";
        case Opcode::Div: return "DIV";
        case Opcode::Mod: return "MOD";
        case Opcode::Neg: return "NEG";
        case Opcode::Eq: return "EQ";
        case Opcode::Ne: return "NE";
        case Opcode::Lt: return "LT";
        case Opcode::Le: return "LE";
        case Opcode::Gt: return "GT";
        case Opcode::Ge: return "GE";
        case Opcode::Not: return "NOT";
        case Opcode::Jmp: return "JMP";
        case Opcode::Jz: return "JZ";
        case Opcode::Call: return "CALL";
        case Opcode::Ret: return "RET";
        case Opcode::Pop: return "POP";
    }
    return "?";
}

std::uint16_t read_u16(std::span<const std::uint8_t> code, std::size_t at) {
    return static_cast<std::uint16_t>(code[at] | (code[at + 1] << 8));
}

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void i64(std::int64_t v) {
        auto u = static_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void str(const std::string& s) {
        u16(static_cast<std::uint16_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        const std::uint16_t v = read_u16(in_, pos_);
        pos_ += 2;
        return v;
    }
    std::int64_t i64() {
        need(8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return static_cast<std::int64_t>(u);
    }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::string str(const char* what) {
        const std::uint16_t len = u16();
        auto b = bytes(len);
        std::string s(b.begin(), b.end());
        if (!is_valid_utf8(s)) throw FormatError(std::string(what) + " is not valid UTF-8");
        return s;
    }
    bool at_end() const { return pos_ == in_.size(); }
    std::size_t offset() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw FormatError("truncated module at byte " + std::to_string(pos_));
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

[[noreturn]] void verify_fail(const Function& fn, std::size_t pc, const std::string& msg) {
    throw VerifyError("function '" + fn.name + "' at " + std::to_string(pc) + ": " + msg);
}

void verify_function(const BytecodeModule& m, const Function& fn) {
    const auto& code = fn.code;
    if (fn.arity > fn.local_count) verify_fail(fn, 0, "arity exceeds local count");

    // Pass 1: instruction boundaries and operand ranges.
    std::vector<bool> boundary(code.size(), false);
    for (std::size_t pc = 0; pc < code.size();) {
        const std::uint8_t op = code[pc];
        const std::size_t size = instruction_size(op);
        if (size == 0) verify_fail(fn, pc, "unknown opcode " + std::to_string(op));
        if (pc + size > code.size()) verify_fail(fn, pc, "truncated operand");
        boundary[pc] = true;
        if (has_operand(op)) {
            const std::uint16_t arg = read_u16(code, pc + 1);
            switch (static_cast<Opcode>(op)) {
                case Opcode::ConstI:
                    if (arg >= m.constants.size() || !std::holds_alternative<std::int64_t>(m.constants[arg]))
                        verify_fail(fn, pc, "CONST_I index " + std::to_string(arg) + " is not an integer constant");
                    break;
                case Opcode::ConstS:
                    if (arg >= m.constants.size() || !std::holds_alternative<std::string>(m.constants[arg]))
                        verify_fail(fn, pc, "CONST_S index " + std::to_string(arg) + " is not a string constant");
                    break;
                case Opcode::Load:
                case Opcode::Store:
                    if (arg >= fn.local_count) verify_fail(fn, pc, "local slot " + std::to_string(arg) + " out of range");
                    break;
                case Opcode::Call:
                    if (arg >= m.functions.size()) verify_fail(fn, pc, "call target " + std::to_string(arg) + " out of range");
                    break;
                default:
                    break;
            }
        }
        pc += size;
    }

    auto jump_target = [&](std::size_t pc) -> std::size_t {
        const auto rel = static_cast<std::int16_t>(read_u16(code, pc + 1));
        const auto target = static_cast<std::int64_t>(pc) + 3 + rel;
        if (target < 0 || target >= static_cast<std::int64_t>(code.size()) ||
            !boundary[static_cast<std::size_t>(target)])
            verify_fail(fn, pc, "jump target " + std::to_string(target) + " is not an instruction boundary");
        return static_cast<std::size_t>(target);
    };

    // Pass 2: every jump target is a boundary (including unreachable jumps).
    for (std::size_t pc = 0; pc < code.size(); pc += instruction_size(code[pc])) {
        const auto op = static_cast<Opcode>(code[pc]);
        if (op == Opcode::Jmp || op == Opcode::Jz) jump_target(pc);
    }

    // Pass 3: operand stack heights over reachable code.
    std::vector<int> height(code.size(), -1);
    std::vector<std::size_t> work;
    auto flow = [&](std::size_t from, std::size_t to, int h) {
        if (to == code.size()) return;  // falls off the end: implicit return
        if (height[to] < 0) {
            height[to] = h;
            work.push_back(to);
        } else if (height[to] != h) {
            verify_fail(fn, from, "inconsistent stack height at " + std::to_string(to));
        }
    };
    if (!code.empty()) flow(0, 0, 0);
    while (!work.empty()) {
        const std::size_t pc = work.back();
        work.pop_back();
        const std::uint8_t raw = code[pc];
        const auto op = static_cast<Opcode>(raw);
        const int h = height[pc];
        int pops = 0;
        int pushes = 0;
        switch (op) {
            case Opcode::ConstI:
            case Opcode::ConstS:
            case Opcode::Load: pushes = 1; break;
            case Opcode::Store:
            case Opcode::Pop:
            case Opcode::Jz: pops = 1; break;
            case Opcode::Neg:
            case Opcode::Not: pops = 1; pushes = 1; break;
            case Opcode::Jmp: break;
            case Opcode::Ret: pops = 1; break;
            case Opcode::Call:
                pops = m.functions[read_u16(code, pc + 1)].arity;
                pushes = 1;
                break;
            default: pops = 2; pushes = 1; break;  // binary operators
        }
        if (h < pops) verify_fail(fn, pc, std::string(mnemonic(raw)) + " needs " + std::to_string(pops) + " operands");
        const int next_h = h - pops + pushes;
        if (next_h > static_cast<int>(kMaxOperandStack)) verify_fail(fn, pc, "operand stack too deep");
        const std::size_t next_pc = pc + instruction_size(raw);
        if (op == Opcode::Ret) continue;
        if (op == Opcode::Jmp || op == Opcode::Jz) flow(pc, jump_target(pc), next_h);
        if (op != Opcode::Jmp) flow(pc, next_pc, next_h);
    }
}

}  // namespace

std::size_t instruction_size(std::uint8_t op) noexcept {
    switch (static_cast<Opcode>(op)) {
        case Opcode::ConstI:
        case Opcode::ConstS:
        case Opcode::Load:
        case Opcode::Store:
        case Opcode::Jmp:
        case Opcode::Jz:
        case Opcode::Call:
            return 3;
        case Opcode::Add:
        case Opcode::Sub:
        case Opcode::Mul:
        case Opcode::Div:
        case Opcode::Mod:
        case Opcode::Neg:
        case Opcode::Eq:
        case Opcode::Ne:
        case Opcode::Lt:
        case Opcode::Le:
        case Opcode::Gt:
        case Opcode::Ge:
        case Opcode::Not:
        case Opcode::Ret:
        case Opcode::Pop:
            return 1;
    }
    return 0;
}

int BytecodeModule::find_function(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < functions.size(); ++i) {
        if (functions[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::uint8_t> encode_module(const BytecodeModule& m) {
    Writer w;
    w.bytes(kMagic);
    w.u8(kFormatVersion);
    w.u16(0);  // flags
    w.u16(static_cast<std::uint16_t>(m.constants.size()));
    for (const auto& c : m.constants) {
        if (const auto* i = std::get_if<std::int64_t>(&c)) {
            w.u8(kTagInteger);
            w.i64(*i);
        } else {
            w.u8(kTagString);
            w.str(std::get<std::string>(c));
        }
    }
    w.u16(static_cast<std::uint16_t>(m.functions.size()));
    for (const auto& f : m.functions) {
        w.str(f.name);
        w.u8(f.arity);
        w.u8(f.local_count);
        w.u16(static_cast<std::uint16_t>(f.code.size()));
        w.bytes(f.code);
    }
    return w.take();
}

BytecodeModule decode_module(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("bad magic: not a WBC1 module");
    const std::uint8_t version = r.u8();
    if (version != kFormatVersion) throw FormatError("unsupported module version " + std::to_string(version));
    if (r.u16() != 0) throw FormatError("reserved flags must be zero");

    BytecodeModule m;
    const std::uint16_t const_count = r.u16();
    m.constants.reserve(const_count);
    for (std::uint16_t i = 0; i < const_count; ++i) {
        const std::uint8_t tag = r.u8();
        if (tag == kTagInteger) m.constants.emplace_back(r.i64());
        else if (tag == kTagString) m.constants.emplace_back(r.str("string constant"));
        else throw FormatError("unknown constant tag " + std::to_string(tag));
    }
    const std::uint16_t func_count = r.u16();
    m.functions.reserve(func_count);
    for (std::uint16_t i = 0; i < func_count; ++i) {
        Function f;
        f.name = r.str("function name");
        f.arity = r.u8();
        f.local_count = r.u8();
        const std::uint16_t len = r.u16();
        auto code = r.bytes(len);
        f.code.assign(code.begin(), code.end());
        m.functions.push_back(std::move(f));
    }
    if (!r.at_end()) throw FormatError("trailing bytes after module at offset " + std::to_string(r.offset()));

    verify(m);
    return m;
}

void verify(const BytecodeModule& m) {
    if (m.constants.size() > 0xFFFF) throw VerifyError("too many constants");
    if (m.functions.size() > 0xFFFF) throw VerifyError("too many functions");
    std::set<std::string_view> names;
    for (const auto& f : m.functions) {
        if (f.name.empty()) throw VerifyError("function with empty name");
        if (!names.insert(f.name).second) throw VerifyError("duplicate function name '" + f.name + "'");
        if (f.code.size() > 0xFFFF) throw VerifyError("function '" + f.name + "' code too long");
        verify_function(m, f);
    }
}

std::string disassemble(const BytecodeModule& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.constants.size(); ++i) {
        out << "const " << i << ": ";
        if (const auto* v = std::get_if<std::int64_t>(&m.constants[i])) out << *v << '\n';
        else out << '"' << std::get<std::string>(m.constants[i]) << "\"\n";
    }
    for (const auto& f : m.functions) {
        out << "function " << f.name << " arity=" << int(f.arity) << " locals=" << int(f.local_count) << '\n';
        for (std::size_t pc = 0; pc < f.code.size();) {
            const std::uint8_t op = f.code[pc];
            const std::size_t size = instruction_size(op);
            out << "  " << pc << ": " << mnemonic(op);
            if (size == 3 && pc + 3 <= f.code.size()) {
                const std::uint16_t arg = read_u16(f.code, pc + 1);
                if (static_cast<Opcode>(op) == Opcode::Jmp || static_cast<Opcode>(op) == Opcode::Jz)
                    out << ' ' << (static_cast<std::int64_t>(pc) + 3 + static_cast<std::int16_t>(arg));
                else
                    out << ' ' << arg;
            }
            out << '\n';
            if (size == 0) break;
            pc += size;
        }
    }
    return out.str();
}

}  // namespace whtmlgate::wmls
