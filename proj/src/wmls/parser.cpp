#include <charconv>
#include <limits>

#include "whtmlgate/wmls/ast.hpp"

namespace whtmlgate::wmls::ast {

namespace {

enum class Tok {
    Ident,
    Int,
    String,
    KwFunction,
    KwVar,
    KwIf,
    KwElse,
    KwWhile,
    KwReturn,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    End,
};

struct Lexeme {
    Tok kind = Tok::End;
    std::string text;  // identifier name or decoded string literal
    std::int64_t number = 0;
    SourceLocation loc;
};

[[noreturn]] void parse_error(SourceLocation loc, const std::string& msg) {
    throw CompileError(CompileError::Kind::Parse, loc, msg);
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Lexeme> run() {
        std::vector<Lexeme> out;
        for (;;) {
            skip_trivia();
            Lexeme lx;
            lx.loc = loc_;
            if (i_ >= src_.size()) {
                out.push_back(lx);
                return out;
            }
            const char c = src_[i_];
            if (ident_start(c)) {
                const std::size_t start = i_;
                while (i_ < src_.size() && ident_char(src_[i_])) advance();
                lx.text = std::string(src_.substr(start, i_ - start));
                lx.kind = keyword(lx.text);
            } else if (digit(c)) {
                const std::size_t start = i_;
                while (i_ < src_.size() && digit(src_[i_])) advance();
                if (i_ < src_.size() && ident_char(src_[i_])) parse_error(loc_, "malformed number");
                const std::string_view digits = src_.substr(start, i_ - start);
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), lx.number);
                if (ec != std::errc{}) parse_error(lx.loc, "integer literal out of range");
                lx.kind = Tok::Int;
            } else if (c == '"' || c == '\'') {
                lx.kind = Tok::String;
                lx.text = string_literal(c);
            } else {
                lx.kind = punct(lx.loc);
            }
            out.push_back(std::move(lx));
        }
    }

private:
    void advance() {
        if (src_[i_] == '\n') {
            ++loc_.line;
            loc_.column = 1;
        } else if ((static_cast<unsigned char>(src_[i_]) & 0xC0) != 0x80) {
            ++loc_.column;
        }
        ++i_;
    }

    bool at(std::string_view s) const { return src_.substr(i_).starts_with(s); }

    void skip_trivia() {
        while (i_ < src_.size()) {
            const char c = src_[i_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (at("//")) {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else if (at("/*")) {
                const SourceLocation open = loc_;
                advance();
                advance();
                while (i_ < src_.size() && !at("*/")) advance();
                if (i_ >= src_.size()) parse_error(open, "unterminated comment");
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    static Tok keyword(std::string_view w) {
        if (w == "function") return Tok::KwFunction;
        if (w == "var") return Tok::KwVar;
        if (w == "if") return Tok::KwIf;
        if (w == "else") return Tok::KwElse;
        if (w == "while") return Tok::KwWhile;
        if (w == "return") return Tok::KwReturn;
        return Tok::Ident;
    }

    std::string string_literal(char quote) {
        const SourceLocation open = loc_;
        advance();
        std::string out;
        for (;;) {
            if (i_ >= src_.size() || src_[i_] == '\n') parse_error(open, "unterminated string literal");
            const char c = src_[i_];
            if (c == quote) {
                advance();
                return out;
            }
            if (c == '\\') {
                advance();
                if (i_ >= src_.size()) parse_error(open, "unterminated string literal");
                switch (src_[i_]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '\\': out += '\\'; break;
                    case '"': out += '"'; break;
                    case '\'': out += '\''; break;
                    default: parse_error(loc_, std::string("unknown escape '\\") + src_[i_] + "'");
                }
                advance();
                continue;
            }
            out += c;
            advance();
        }
    }

    Tok punct(SourceLocation loc) {
        struct Entry {
            std::string_view text;
            Tok kind;
        };
        static constexpr Entry kTable[] = {
            {"==", Tok::EqEq}, {"!=", Tok::NotEq}, {"<=", Tok::Le},      {">=", Tok::Ge},     {"&&", Tok::AndAnd},
            {"||", Tok::OrOr}, {"(", Tok::LParen}, {")", Tok::RParen},   {"{", Tok::LBrace},  {"}", Tok::RBrace},
            {",", Tok::Comma}, {";", Tok::Semi},   {"=", Tok::Assign},   {"+", Tok::Plus},    {"-", Tok::Minus},
            {"*", Tok::Star},  {"/", Tok::Slash},  {"%", Tok::Percent},  {"!", Tok::Bang},    {"<", Tok::Lt},
            {">", Tok::Gt},
        };
        for (const auto& e : kTable) {
            if (at(e.text)) {
                for (std::size_t k = 0; k < e.text.size(); ++k) advance();
                return e.kind;
            }
        }
        parse_error(loc, std::string("unexpected character '") + src_[i_] + "'");
    }

    std::string_view src_;
    std::size_t i_ = 0;
    SourceLocation loc_;
};

inline constexpr int kMaxNesting = 200;

class Parser {
public:
    explicit Parser(std::vector<Lexeme> toks) : toks_(std::move(toks)) {}

    Script script() {
        Script s;
        while (peek().kind != Tok::End) s.functions.push_back(function());
        return s;
    }

private:
    const Lexeme& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Lexeme& next() {
        const Lexeme& lx = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return lx;
    }
    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        next();
        return true;
    }
    const Lexeme& expect(Tok kind, const char* what) {
        if (peek().kind != kind) parse_error(peek().loc, std::string("expected ") + what);
        return next();
    }

    Function function() {
        Function fn;
        fn.loc = expect(Tok::KwFunction, "'function'").loc;
        fn.name = expect(Tok::Ident, "function name").text;
        expect(Tok::LParen, "'('");
        if (!accept(Tok::RParen)) {
            do {
                fn.params.push_back(expect(Tok::Ident, "parameter name").text);
            } while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
        }
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            if (peek().kind == Tok::End) parse_error(peek().loc, "expected '}'");
            fn.body.push_back(statement());
        }
        return fn;
    }

    StmtPtr make(SourceLocation loc, auto node) {
        auto s = std::make_unique<Stmt>();
        s->node = std::move(node);
        s->loc = loc;
        return s;
    }

    StmtPtr statement() {
        const SourceLocation loc = peek().loc;
        NestingGuard guard(*this, loc);
        switch (peek().kind) {
            case Tok::KwVar: {
                next();
                // `var a = 1, b;` becomes a block of declarations.
                Block decls;
                do {
                    const Lexeme& name = expect(Tok::Ident, "variable name");
                    VarDecl d{name.text, nullptr};
                    if (accept(Tok::Assign)) d.init = expression();
                    decls.body.push_back(make(name.loc, std::move(d)));
                } while (accept(Tok::Comma));
                expect(Tok::Semi, "';'");
                if (decls.body.size() == 1) return std::move(decls.body.front());
                return make(loc, std::move(decls));
            }
            case Tok::KwIf: {
                next();
                expect(Tok::LParen, "'('");
                If s;
                s.cond = expression();
                expect(Tok::RParen, "')'");
                s.then_branch = statement();
                if (accept(Tok::KwElse)) s.else_branch = statement();
                return make(loc, std::move(s));
            }
            case Tok::KwWhile: {
                next();
                expect(Tok::LParen, "'('");
                While s;
                s.cond = expression();
                expect(Tok::RParen, "')'");
                s.body = statement();
                return make(loc, std::move(s));
            }
            case Tok::KwReturn: {
                next();
                Return s;
                if (peek().kind != Tok::Semi) s.value = expression();
                expect(Tok::Semi, "';'");
                return make(loc, std::move(s));
            }
            case Tok::LBrace: {
                next();
                Block b;
                while (!accept(Tok::RBrace)) {
                    if (peek().kind == Tok::End) parse_error(peek().loc, "expected '}'");
                    b.body.push_back(statement());
                }
                return make(loc, std::move(b));
            }
            case Tok::Semi:
                next();
                return make(loc, Block{});
            case Tok::Ident:
                if (peek(1).kind == Tok::Assign) {
                    Assign a;
                    a.name = next().text;
                    next();
                    a.value = expression();
                    expect(Tok::Semi, "';'");
                    return make(loc, std::move(a));
                }
                [[fallthrough]];
            default: {
                ExprStmt s{expression()};
                expect(Tok::Semi, "';'");
                return make(loc, std::move(s));
            }
        }
    }

    ExprPtr make_expr(SourceLocation loc, auto node) {
        auto e = std::make_unique<Expr>();
        e->node = std::move(node);
        e->loc = loc;
        return e;
    }

    ExprPtr binary(SourceLocation loc, BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
        return make_expr(loc, Binary{op, std::move(lhs), std::move(rhs)});
    }

    ExprPtr expression() { return logical_or(); }

    ExprPtr logical_or() {
        ExprPtr lhs = logical_and();
        while (peek().kind == Tok::OrOr) {
            const SourceLocation loc = next().loc;
            lhs = binary(loc, BinaryOp::Or, std::move(lhs), logical_and());
        }
        return lhs;
    }

    ExprPtr logical_and() {
        ExprPtr lhs = equality();
        while (peek().kind == Tok::AndAnd) {
            const SourceLocation loc = next().loc;
            lhs = binary(loc, BinaryOp::And, std::move(lhs), equality());
        }
        return lhs;
    }

    ExprPtr equality() {
        ExprPtr lhs = relational();
        for (;;) {
            const Tok k = peek().kind;
            if (k != Tok::EqEq && k != Tok::NotEq) return lhs;
            const SourceLocation loc = next().loc;
            lhs = binary(loc, k == Tok::EqEq ? BinaryOp::Eq : BinaryOp::Ne, std::move(lhs), relational());
        }
    }

    ExprPtr relational() {
        ExprPtr lhs = additive();
        for (;;) {
            BinaryOp op;
            switch (peek().kind) {
                case Tok::Lt: op = BinaryOp::Lt; break;
                case Tok::Le: op = BinaryOp::Le; break;
                case Tok::Gt: op = BinaryOp::Gt; break;
                case Tok::Ge: op = BinaryOp::Ge; break;
                default: return lhs;
            }
            const SourceLocation loc = next().loc;
            lhs = binary(loc, op, std::move(lhs), additive());
        }
    }

    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        for (;;) {
            const Tok k = peek().kind;
            if (k != Tok::Plus && k != Tok::Minus) return lhs;
            const SourceLocation loc = next().loc;
            lhs = binary(loc, k == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs), multiplicative());
        }
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary();
        for (;;) {
            BinaryOp op;
            switch (peek().kind) {
                case Tok::Star: op = BinaryOp::Mul; break;
                case Tok::Slash: op = BinaryOp::Div; break;
                case Tok::Percent: op = BinaryOp::Mod; break;
                default: return lhs;
            }
            const SourceLocation loc = next().loc;
            lhs = binary(loc, op, std::move(lhs), unary());
        }
    }

    ExprPtr unary() {
        const SourceLocation loc = peek().loc;
        NestingGuard guard(*this, loc);
        if (accept(Tok::Minus)) return make_expr(loc, Unary{UnaryOp::Neg, unary()});
        if (accept(Tok::Bang)) return make_expr(loc, Unary{UnaryOp::Not, unary()});
        return primary();
    }

    ExprPtr primary() {
        const Lexeme& lx = peek();
        const SourceLocation loc = lx.loc;
        switch (lx.kind) {
            case Tok::Int: {
                const std::int64_t v = next().number;
                return make_expr(loc, IntLiteral{v});
            }
            case Tok::String: {
                std::string v = next().text;
                return make_expr(loc, StringLiteral{std::move(v)});
            }
            case Tok::Ident: {
                std::string name = next().text;
                if (!accept(Tok::LParen)) return make_expr(loc, Identifier{std::move(name)});
                Call call{std::move(name), {}};
                if (!accept(Tok::RParen)) {
                    do {
                        call.args.push_back(expression());
                    } while (accept(Tok::Comma));
                    expect(Tok::RParen, "')'");
                }
                return make_expr(loc, std::move(call));
            }
            case Tok::LParen: {
                next();
                ExprPtr inner = expression();
                expect(Tok::RParen, "')'");
                return inner;
            }
            default:
                parse_error(loc, "expected an expression");
        }
    }

    struct NestingGuard {
        NestingGuard(Parser& p, SourceLocation loc) : parser(p) {
            if (++parser.depth_ > kMaxNesting)
                throw CompileError(CompileError::Kind::Limit, loc, "nesting deeper than " + std::to_string(kMaxNesting));
        }
        ~NestingGuard() { --parser.depth_; }
        Parser& parser;
    };

    std::vector<Lexeme> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

Script parse_script(std::string_view source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.script();
}

}  // namespace whtmlgate::wmls::ast
