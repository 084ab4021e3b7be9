#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whtmlgate/wmls/error.hpp"

namespace whtmlgate::wmls::ast {

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLiteral {
    std::int64_t value;
};
struct StringLiteral {
    std::string value;
};
struct Identifier {
    std::string name;
};
struct Unary {
    UnaryOp op;
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Call {
    std::string callee;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<IntLiteral, StringLiteral, Identifier, Unary, Binary, Call> node;
    SourceLocation loc;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct VarDecl {
    std::string name;
    ExprPtr init;  // may be null
};
struct Assign {
    std::string name;
    ExprPtr value;
};
struct If {
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;  // may be null
};
struct While {
    ExprPtr cond;
    StmtPtr body;
};
struct Return {
    ExprPtr value;  // may be null
};
struct ExprStmt {
    ExprPtr expr;
};
struct Block {
    std::vector<StmtPtr> body;
};

struct Stmt {
    std::variant<VarDecl, Assign, If, While, Return, ExprStmt, Block> node;
    SourceLocation loc;
};

struct Function {
    std::string name;
    std::vector<std::string> params;
    std::vector<StmtPtr> body;
    SourceLocation loc;
};

struct Script {
    std::vector<Function> functions;
};

/// Parses the script subset. Only syntax is checked here; names and arities
/// are resolved by the compiler. Throws CompileError(Parse).
Script parse_script(std::string_view source);

}  // namespace whtmlgate::wmls::ast
