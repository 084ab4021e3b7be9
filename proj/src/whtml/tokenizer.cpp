#include "whtmlgate/whtml/tokenizer.hpp"

#include <cstdint>
#include <optional>

#include "whtmlgate/utf8.hpp"

namespace whtmlgate::whtml {

namespace {

bool is_name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.' || c == ':';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Scanner {
public:
    explicit Scanner(std::string_view input) : in_(input) {}

    bool done() const { return i_ >= in_.size(); }
    char peek(std::size_t k = 0) const { return i_ + k < in_.size() ? in_[i_ + k] : '\0'; }
    bool starts_with(std::string_view s) const { return in_.substr(i_).starts_with(s); }
    Position pos() const { return pos_; }
    std::size_t offset() const { return i_; }

    void bump() {
        const char c = in_[i_++];
        pos_.byte_offset = i_;
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++pos_.column;
        }
    }

    void bump(std::size_t n) {
        while (n-- > 0) bump();
    }

    void skip_space() {
        while (!done() && is_space(peek())) bump();
    }

    [[noreturn]] void fail(const std::string& msg, std::optional<Position> at = std::nullopt) const {
        const Position p = at.value_or(pos_);
        throw Error(ErrorKind::Syntax, p,
                    msg + " at line " + std::to_string(p.line) + ", column " + std::to_string(p.column));
    }

    std::string name() {
        if (!is_name_start(peek())) fail("expected a name");
        const std::size_t start = i_;
        while (!done() && is_name_char(peek())) bump();
        return std::string(in_.substr(start, i_ - start));
    }

    /// Consumes up to and including `terminator`; fails with `what` if absent.
    void skip_past(std::string_view terminator, const char* what, Position opened_at) {
        const std::size_t at = in_.find(terminator, i_);
        if (at == std::string_view::npos) fail(std::string("unterminated ") + what, opened_at);
        bump(at + terminator.size() - i_);
    }

    /// Reads character data until `stop` (not consumed), decoding references.
    std::string char_data(char stop, bool in_attribute) {
        std::string out;
        while (!done() && peek() != stop) {
            const char c = peek();
            if (c == '&') {
                decode_reference(out);
            } else if (in_attribute && c == '<') {
                fail("'<' in attribute value");
            } else {
                out += c;
                bump();
            }
        }
        return out;
    }

private:
    void decode_reference(std::string& out) {
        const Position at = pos_;
        const std::size_t semi = in_.find(';', i_);
        if (semi == std::string_view::npos || semi - i_ > 12) fail("bare '&' in character data", at);
        const std::string_view ref = in_.substr(i_ + 1, semi - i_ - 1);
        if (ref == "lt") out += '<';
        else if (ref == "gt") out += '>';
        else if (ref == "amp") out += '&';
        else if (ref == "quot") out += '"';
        else if (ref == "apos") out += '\'';
        else if (ref.size() > 1 && ref[0] == '#') {
            const bool hex = ref[1] == 'x' || ref[1] == 'X';
            const std::string_view digits = ref.substr(hex ? 2 : 1);
            if (digits.empty()) fail("empty character reference", at);
            std::uint32_t cp = 0;
            for (char d : digits) {
                int v = -1;
                if (d >= '0' && d <= '9') v = d - '0';
                else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
                else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
                if (v < 0) fail("bad character reference", at);
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                if (cp > 0x10FFFF) fail("character reference out of range", at);
            }
            if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid character reference", at);
            append_utf8(out, cp);
        } else {
            fail("unknown entity '&" + std::string(ref) + ";'", at);
        }
        bump(semi + 1 - i_);
    }

    std::string_view in_;
    std::size_t i_ = 0;
    Position pos_;
};

Token read_tag(Scanner& s) {
    Token tok;
    tok.position = s.pos();
    s.bump();  // '<'
    if (s.peek() == '/') {
        s.bump();
        tok.kind = TokenKind::EndTag;
        tok.name = s.name();
        s.skip_space();
        if (s.done()) s.fail("unterminated tag", tok.position);
        if (s.peek() != '>') s.fail("expected '>' in end tag");
        s.bump();
        return tok;
    }

    tok.name = s.name();
    for (;;) {
        const bool had_space = is_space(s.peek());
        s.skip_space();
        if (s.done()) s.fail("unterminated tag", tok.position);
        const char c = s.peek();
        if (c == '>') {
            s.bump();
            tok.kind = TokenKind::StartTag;
            return tok;
        }
        if (c == '/') {
            s.bump();
            if (s.done()) s.fail("unterminated tag", tok.position);
            if (s.peek() != '>') s.fail("expected '>' after '/'");
            s.bump();
            tok.kind = TokenKind::EmptyTag;
            return tok;
        }
        if (!had_space) s.fail("expected whitespace before attribute");
        const Position attr_pos = s.pos();
        if (!is_name_start(c)) s.fail("bad attribute syntax");
        Attribute attr;
        attr.name = s.name();
        s.skip_space();
        if (s.peek() != '=') s.fail("attribute '" + attr.name + "' has no value");
        s.bump();
        s.skip_space();
        const char quote = s.peek();
        if (quote != '"' && quote != '\'') s.fail("attribute value must be quoted");
        s.bump();
        attr.value = s.char_data(quote, true);
        if (s.done()) s.fail("unterminated attribute value", attr_pos);
        s.bump();
        for (const auto& existing : tok.attributes) {
            if (existing.name == attr.name) s.fail("duplicate attribute '" + attr.name + "'", attr_pos);
        }
        tok.attributes.push_back(std::move(attr));
    }
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
    std::size_t bad = 0;
    if (!is_valid_utf8(input, &bad)) {
        // Recompute line/column up to the bad byte.
        Position p;
        for (std::size_t i = 0; i < bad; ++i) {
            if (input[i] == '\n') {
                ++p.line;
                p.column = 1;
            } else if ((static_cast<unsigned char>(input[i]) & 0xC0) != 0x80) {
                ++p.column;
            }
        }
        p.byte_offset = bad;
        throw Error(ErrorKind::Syntax, p, "invalid UTF-8 at byte " + std::to_string(bad));
    }

    std::vector<Token> tokens;
    Scanner s(input);
    while (!s.done()) {
        if (s.peek() != '<') {
            Token tok;
            tok.kind = TokenKind::Text;
            tok.position = s.pos();
            tok.text = s.char_data('<', false);
            if (!tok.text.empty()) tokens.push_back(std::move(tok));
            continue;
        }
        const Position at = s.pos();
        if (s.starts_with("<!--")) {
            s.bump(4);
            s.skip_past("-->", "comment", at);
        } else if (s.starts_with("<![CDATA[")) {
            s.fail("CDATA sections are not supported");
        } else if (s.starts_with("<?")) {
            s.skip_past("?>", "processing instruction", at);
        } else if (s.starts_with("<!")) {
            s.skip_past(">", "declaration", at);
        } else if (s.peek(1) == '/' || is_name_start(s.peek(1))) {
            tokens.push_back(read_tag(s));
        } else {
            s.fail("stray '<'");
        }
    }
    return tokens;
}

}  // namespace whtmlgate::whtml
