#include "whtmlgate/wmls/compiler.hpp"

#include <map>
#include <unordered_map>

namespace whtmlgate::wmls {

namespace {

using namespace ast;

[[noreturn]] void fail(CompileError::Kind kind, SourceLocation loc, const std::string& msg) {
    throw CompileError(kind, loc, msg);
}

struct Signature {
    std::uint16_t index;
    std::size_t arity;
};

class ConstantPool {
public:
    std::uint16_t intern(Constant c, SourceLocation loc) {
        auto it = index_.find(c);
        if (it != index_.end()) return it->second;
        if (pool_.size() >= 0xFFFF) fail(CompileError::Kind::Limit, loc, "too many constants");
        const auto idx = static_cast<std::uint16_t>(pool_.size());
        index_.emplace(c, idx);
        pool_.push_back(std::move(c));
        return idx;
    }
    std::vector<Constant> take() { return std::move(pool_); }

private:
    std::vector<Constant> pool_;
    std::map<Constant, std::uint16_t> index_;
};

class FunctionCompiler {
public:
    FunctionCompiler(ConstantPool& pool, const std::unordered_map<std::string, Signature>& sigs)
        : pool_(pool), sigs_(sigs) {}

    wmls::Function compile(const ast::Function& fn) {
        wmls::Function out;
        out.name = fn.name;
        if (fn.params.size() > 255) fail(CompileError::Kind::Limit, fn.loc, "too many parameters");
        for (const auto& p : fn.params) declare(p, fn.loc);
        for (const auto& s : fn.body) stmt(*s);
        emit_const_int(0, fn.loc);
        emit(Opcode::Ret);
        if (code_.size() > 0xFFFF) fail(CompileError::Kind::Limit, fn.loc, "function '" + fn.name + "' is too large");
        out.arity = static_cast<std::uint8_t>(fn.params.size());
        out.local_count = static_cast<std::uint8_t>(slots_.size());
        out.code = std::move(code_);
        return out;
    }

private:
    void declare(const std::string& name, SourceLocation loc) {
        if (slots_.contains(name)) fail(CompileError::Kind::Name, loc, "'" + name + "' is already declared");
        if (slots_.size() >= 255) fail(CompileError::Kind::Limit, loc, "too many local variables");
        slots_.emplace(name, static_cast<std::uint16_t>(slots_.size()));
    }

    std::uint16_t slot(const std::string& name, SourceLocation loc) const {
        auto it = slots_.find(name);
        if (it == slots_.end()) fail(CompileError::Kind::Name, loc, "undefined variable '" + name + "'");
        return it->second;
    }

    void emit(Opcode op) { code_.push_back(static_cast<std::uint8_t>(op)); }

    void emit(Opcode op, std::uint16_t arg) {
        code_.push_back(static_cast<std::uint8_t>(op));
        code_.push_back(static_cast<std::uint8_t>(arg & 0xFF));
        code_.push_back(static_cast<std::uint8_t>(arg >> 8));
    }

    void emit_const_int(std::int64_t v, SourceLocation loc) { emit(Opcode::ConstI, pool_.intern(Constant{v}, loc)); }

    /// Emits a jump with a placeholder operand; returns the operand offset.
    std::size_t emit_jump(Opcode op) {
        emit(op, 0);
        return code_.size() - 2;
    }

    void patch(std::size_t operand_at, std::size_t target, SourceLocation loc) {
        const auto rel = static_cast<std::int64_t>(target) - static_cast<std::int64_t>(operand_at + 2);
        if (rel < INT16_MIN || rel > INT16_MAX) fail(CompileError::Kind::Limit, loc, "jump distance too large");
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(rel));
        code_[operand_at] = static_cast<std::uint8_t>(u & 0xFF);
        code_[operand_at + 1] = static_cast<std::uint8_t>(u >> 8);
    }

    /// Pushes the Boolean false: !!0.
    void emit_false(SourceLocation loc) {
        emit_const_int(0, loc);
        emit(Opcode::Not);
        emit(Opcode::Not);
    }

    void stmt(const Stmt& s) {
        std::visit([&](const auto& node) { stmt_node(node, s.loc); }, s.node);
    }

    void stmt_node(const VarDecl& d, SourceLocation loc) {
        if (d.init) expr(*d.init);
        else emit_const_int(0, loc);
        declare(d.name, loc);
        emit(Opcode::Store, slot(d.name, loc));
    }

    void stmt_node(const Assign& a, SourceLocation loc) {
        const std::uint16_t s = slot(a.name, loc);
        expr(*a.value);
        emit(Opcode::Store, s);
    }

    void stmt_node(const If& s, SourceLocation loc) {
        expr(*s.cond);
        const std::size_t to_else = emit_jump(Opcode::Jz);
        stmt(*s.then_branch);
        if (s.else_branch) {
            const std::size_t to_end = emit_jump(Opcode::Jmp);
            patch(to_else, code_.size(), loc);
            stmt(*s.else_branch);
            patch(to_end, code_.size(), loc);
        } else {
            patch(to_else, code_.size(), loc);
        }
    }

    void stmt_node(const While& s, SourceLocation loc) {
        const std::size_t top = code_.size();
        expr(*s.cond);
        const std::size_t to_end = emit_jump(Opcode::Jz);
        stmt(*s.body);
        const std::size_t back = emit_jump(Opcode::Jmp);
        patch(back, top, loc);
        patch(to_end, code_.size(), loc);
    }

    void stmt_node(const Return& r, SourceLocation loc) {
        if (r.value) expr(*r.value);
        else emit_const_int(0, loc);
        emit(Opcode::Ret);
    }

    void stmt_node(const ExprStmt& e, SourceLocation) {
        expr(*e.expr);
        emit(Opcode::Pop);
    }

    void stmt_node(const Block& b, SourceLocation) {
        for (const auto& s : b.body) stmt(*s);
    }

    void expr(const Expr& e) {
        std::visit([&](const auto& node) { expr_node(node, e.loc); }, e.node);
    }

    void expr_node(const IntLiteral& lit, SourceLocation loc) { emit_const_int(lit.value, loc); }

    void expr_node(const StringLiteral& lit, SourceLocation loc) {
        emit(Opcode::ConstS, pool_.intern(Constant{lit.value}, loc));
    }

    void expr_node(const Identifier& id, SourceLocation loc) { emit(Opcode::Load, slot(id.name, loc)); }

    void expr_node(const Unary& u, SourceLocation) {
        expr(*u.operand);
        emit(u.op == UnaryOp::Neg ? Opcode::Neg : Opcode::Not);
    }

    void expr_node(const Binary& b, SourceLocation loc) {
        if (b.op == BinaryOp::And) {
            // lhs; JZ F; rhs; NOT; NOT; JMP E; F: false; E:
            expr(*b.lhs);
            const std::size_t to_false = emit_jump(Opcode::Jz);
            expr(*b.rhs);
            emit(Opcode::Not);
            emit(Opcode::Not);
            const std::size_t to_end = emit_jump(Opcode::Jmp);
            patch(to_false, code_.size(), loc);
            emit_false(loc);
            patch(to_end, code_.size(), loc);
            return;
        }
        if (b.op == BinaryOp::Or) {
            // lhs; JZ R; true; JMP E; R: rhs; NOT; NOT; E:
            expr(*b.lhs);
            const std::size_t to_rhs = emit_jump(Opcode::Jz);
            emit_const_int(0, loc);
            emit(Opcode::Not);
            const std::size_t to_end = emit_jump(Opcode::Jmp);
            patch(to_rhs, code_.size(), loc);
            expr(*b.rhs);
            emit(Opcode::Not);
            emit(Opcode::Not);
            patch(to_end, code_.size(), loc);
            return;
        }
        expr(*b.lhs);
        expr(*b.rhs);
        switch (b.op) {
            case BinaryOp::Add: emit(Opcode::Add); break;
            case BinaryOp::Sub: emit(Opcode::Sub); break;
            case BinaryOp::Mul: emit(Opcode::Mul); break;
            case BinaryOp::Div: emit(Opcode::Div); break;
            case BinaryOp::Mod: emit(Opcode::Mod); break;
            case BinaryOp::Eq: emit(Opcode::Eq); break;
            case BinaryOp::Ne: emit(Opcode::Ne); break;
            case BinaryOp::Lt: emit(Opcode::Lt); break;
            case BinaryOp::Le: emit(Opcode::Le); break;
            case BinaryOp::Gt: emit(Opcode::Gt); break;
            case BinaryOp::Ge: emit(Opcode::Ge); break;
            case BinaryOp::And:
            case BinaryOp::Or: break;
        }
    }

    void expr_node(const Call& c, SourceLocation loc) {
        auto it = sigs_.find(c.callee);
        if (it == sigs_.end()) fail(CompileError::Kind::Name, loc, "undefined function '" + c.callee + "'");
        if (c.args.size() != it->second.arity) {
            fail(CompileError::Kind::Arity, loc,
                 "'" + c.callee + "' expects " + std::to_string(it->second.arity) + " argument(s), got " +
                     std::to_string(c.args.size()));
        }
        for (const auto& a : c.args) expr(*a);
        emit(Opcode::Call, it->second.index);
    }

    ConstantPool& pool_;
    const std::unordered_map<std::string, Signature>& sigs_;
    std::unordered_map<std::string, std::uint16_t> slots_;
    std::vector<std::uint8_t> code_;
};

}  // namespace

BytecodeModule compile(const ast::Script& script) {
    std::unordered_map<std::string, Signature> sigs;
    if (script.functions.size() > 0xFFFF) fail(CompileError::Kind::Limit, {}, "too many functions");
    for (std::size_t i = 0; i < script.functions.size(); ++i) {
        const auto& fn = script.functions[i];
        if (!sigs.emplace(fn.name, Signature{static_cast<std::uint16_t>(i), fn.params.size()}).second)
            fail(CompileError::Kind::Name, fn.loc, "function '" + fn.name + "' is defined twice");
    }

    ConstantPool pool;
    BytecodeModule m;
    for (const auto& fn : script.functions) {
        FunctionCompiler fc(pool, sigs);
        m.functions.push_back(fc.compile(fn));
    }
    m.constants = pool.take();
    verify(m);
    return m;
}

BytecodeModule compile(const ScriptSource& src) { return compile(ast::parse_script(src.text)); }

std::string cache_key(const ScriptSource& src) { return to_hex16(src.digest()); }

}  // namespace whtmlgate::wmls
