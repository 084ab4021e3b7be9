#include "whtmlgate/wmls/vm.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace whtmlgate::wmls {

namespace {

constexpr std::size_t kMaxStringLength = 1 << 20;

struct Frame {
    const Function* fn;
    std::size_t pc;
    std::size_t locals_base;
    std::size_t stack_base;
};

[[noreturn]] void type_error(const char* op, const Value& a, const Value& b) {
    throw RuntimeError(RuntimeError::Kind::TypeError,
                       std::string("type error: ") + op + " on " + a.to_display() + " and " + b.to_display());
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Machine {
public:
    Machine(const BytecodeModule& m, std::uint64_t fuel) : m_(m), fuel_(fuel) {}

    Execution run(std::size_t entry, std::span<const Value> args) {
        for (const auto& a : args) stack_.push_back(a);
        enter(entry);
        for (;;) {
            Frame& f = frames_.back();
            const auto& code = f.fn->code;
            if (f.pc >= code.size()) {
                // Fell off the end.
                if (auto done = leave(Value::integer(0))) return Execution{std::move(*done), steps_};
                continue;
            }
            if (steps_ >= fuel_)
                throw RuntimeError(RuntimeError::Kind::FuelExhausted,
                                   "instruction budget of " + std::to_string(fuel_) + " exhausted");
            ++steps_;
            const auto op = static_cast<Opcode>(code[f.pc]);
            const std::uint16_t arg =
                instruction_size(code[f.pc]) == 3 ? static_cast<std::uint16_t>(code[f.pc + 1] | (code[f.pc + 2] << 8)) : 0;
            f.pc += instruction_size(code[f.pc]);

            switch (op) {
                case Opcode::ConstI: stack_.push_back(Value::integer(std::get<std::int64_t>(m_.constants[arg]))); break;
                case Opcode::ConstS: stack_.push_back(Value::string(std::get<std::string>(m_.constants[arg]))); break;
                case Opcode::Load: stack_.push_back(locals_[f.locals_base + arg]); break;
                case Opcode::Store:
                    locals_[f.locals_base + arg] = std::move(stack_.back());
                    stack_.pop_back();
                    break;
                case Opcode::Pop: stack_.pop_back(); break;
                case Opcode::Neg: {
                    Value& a = stack_.back();
                    if (!a.is_integer())
                        throw RuntimeError(RuntimeError::Kind::TypeError, "type error: negation of " + a.to_display());
                    a = Value::integer(wrap_sub(0, std::get<std::int64_t>(a.v)));
                    break;
                }
                case Opcode::Not: {
                    Value& a = stack_.back();
                    a = Value::boolean(!a.truthy());
                    break;
                }
                case Opcode::Jmp: f.pc = static_cast<std::size_t>(static_cast<std::int64_t>(f.pc) + static_cast<std::int16_t>(arg)); break;
                case Opcode::Jz: {
                    const bool t = stack_.back().truthy();
                    stack_.pop_back();
                    if (!t) f.pc = static_cast<std::size_t>(static_cast<std::int64_t>(f.pc) + static_cast<std::int16_t>(arg));
                    break;
                }
                case Opcode::Call: enter(arg); break;
                case Opcode::Ret: {
                    Value result = std::move(stack_.back());
                    stack_.pop_back();
                    if (auto done = leave(std::move(result))) return Execution{std::move(*done), steps_};
                    break;
                }
                default: binary(op); break;
            }
        }
    }

private:
    /// Arguments are the top `arity` operands of the caller's stack.
    void enter(std::size_t index) {
        const Function& fn = m_.functions[index];
        if (frames_.size() >= kMaxCallDepth)
            throw RuntimeError(RuntimeError::Kind::StackOverflow,
                               "call depth exceeds " + std::to_string(kMaxCallDepth) + " in '" + fn.name + "'");
        Frame f{&fn, 0, locals_.size(), stack_.size() - fn.arity};
        locals_.resize(locals_.size() + fn.local_count, Value::integer(0));
        for (std::size_t i = 0; i < fn.arity; ++i) locals_[f.locals_base + i] = std::move(stack_[f.stack_base + i]);
        stack_.resize(f.stack_base);
        frames_.push_back(f);
    }

    /// Pops the current frame; returns the value if it was the entry frame.
    std::optional<Value> leave(Value result) {
        const Frame f = frames_.back();
        frames_.pop_back();
        locals_.resize(f.locals_base);
        stack_.resize(f.stack_base);
        if (frames_.empty()) return result;
        stack_.push_back(std::move(result));
        return std::nullopt;
    }

    void binary(Opcode op) {
        Value b = std::move(stack_.back());
        stack_.pop_back();
        Value& a = stack_.back();
        const bool ints = a.is_integer() && b.is_integer();
        const bool strs = a.is_string() && b.is_string();

        switch (op) {
            case Opcode::Add:
                if (ints) {
                    a = Value::integer(wrap_add(std::get<std::int64_t>(a.v), std::get<std::int64_t>(b.v)));
                } else if (strs) {
                    auto& s = std::get<std::string>(a.v);
                    const auto& t = std::get<std::string>(b.v);
                    if (s.size() + t.size() > kMaxStringLength)
                        throw RuntimeError(RuntimeError::Kind::TypeError, "string longer than 1 MiB");
                    s += t;
                } else {
                    type_error("+", a, b);
                }
                return;
            case Opcode::Sub:
            case Opcode::Mul:
            case Opcode::Div:
            case Opcode::Mod: {
                if (!ints) type_error("arithmetic", a, b);
                const std::int64_t x = std::get<std::int64_t>(a.v);
                const std::int64_t y = std::get<std::int64_t>(b.v);
                std::int64_t r = 0;
                if (op == Opcode::Sub) {
                    r = wrap_sub(x, y);
                } else if (op == Opcode::Mul) {
                    r = wrap_mul(x, y);
                } else {
                    if (y == 0) throw RuntimeError(RuntimeError::Kind::DivideByZero, "division by zero");
                    if (x == std::numeric_limits<std::int64_t>::min() && y == -1) r = op == Opcode::Div ? x : 0;
                    else r = op == Opcode::Div ? x / y : x % y;
                }
                a = Value::integer(r);
                return;
            }
            case Opcode::Eq:
            case Opcode::Ne: {
                if (a.v.index() != b.v.index()) type_error(op == Opcode::Eq ? "==" : "!=", a, b);
                const bool eq = a == b;
                a = Value::boolean(op == Opcode::Eq ? eq : !eq);
                return;
            }
            default: {
                int cmp = 0;
                if (ints) {
                    const auto x = std::get<std::int64_t>(a.v), y = std::get<std::int64_t>(b.v);
                    cmp = x < y ? -1 : (x > y ? 1 : 0);
                } else if (strs) {
                    const int c = std::get<std::string>(a.v).compare(std::get<std::string>(b.v));
                    cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
                } else {
                    type_error("comparison", a, b);
                }
                bool r = false;
                switch (op) {
                    case Opcode::Lt: r = cmp < 0; break;
                    case Opcode::Le: r = cmp <= 0; break;
                    case Opcode::Gt: r = cmp > 0; break;
                    case Opcode::Ge: r = cmp >= 0; break;
                    default: break;
                }
                a = Value::boolean(r);
                return;
            }
        }
    }

    const BytecodeModule& m_;
    std::uint64_t fuel_;
    std::uint64_t steps_ = 0;
    std::vector<Value> stack_;
    std::vector<Value> locals_;
    std::vector<Frame> frames_;
};

}  // namespace

bool Value::truthy() const noexcept {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i != 0;
    return !std::get<std::string>(v).empty();
}

std::string Value::to_display() const {
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return '"' + std::get<std::string>(v) + '"';
}

Execution run(const BytecodeModule& module, std::string_view entry, std::span<const Value> args, std::uint64_t fuel) {
    verify(module);
    const int index = module.find_function(entry);
    if (index < 0)
        throw RuntimeError(RuntimeError::Kind::NoSuchFunction, "no function named '" + std::string(entry) + "'");
    const Function& fn = module.functions[static_cast<std::size_t>(index)];
    if (args.size() != fn.arity)
        throw RuntimeError(RuntimeError::Kind::ArityMismatch, "'" + fn.name + "' expects " + std::to_string(fn.arity) +
                                                                  " argument(s), got " + std::to_string(args.size()));
    Machine machine(module, fuel);
    return machine.run(static_cast<std::size_t>(index), args);
}

std::string_view to_string(CompileError::Kind kind) noexcept {
    switch (kind) {
        case CompileError::Kind::Parse: return "ParseError";
        case CompileError::Kind::Name: return "NameError";
        case CompileError::Kind::Arity: return "ArityError";
        case CompileError::Kind::Limit: return "LimitError";
    }
    return "CompileError";
}

std::string_view to_string(RuntimeError::Kind kind) noexcept {
    switch (kind) {
        case RuntimeError::Kind::DivideByZero: return "DivideByZero";
        case RuntimeError::Kind::TypeError: return "TypeError";
        case RuntimeError::Kind::StackOverflow: return "StackOverflow";
        case RuntimeError::Kind::FuelExhausted: return "FuelExhausted";
        case RuntimeError::Kind::NoSuchFunction: return "NoSuchFunction";
        case RuntimeError::Kind::ArityMismatch: return "ArityMismatch";
    }
    return "RuntimeError";
}

}  // namespace whtmlgate::wmls
