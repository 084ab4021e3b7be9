#include "whtmlgate/whtml/wellformed.hpp"

#include <algorithm>

namespace whtmlgate::whtml {

namespace {

bool same_name(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
               return lower(x) == lower(y);
           });
}

std::string where(const Position& p) {
    return "line " + std::to_string(p.line) + ", column " + std::to_string(p.column);
}

}  // namespace

std::optional<Violation> check_well_formed(std::span<const Token> tokens) {
    // Indices of open start tags.
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        switch (tok.kind) {
            case TokenKind::StartTag:
                stack.push_back(i);
                break;
            case TokenKind::EndTag: {
                if (stack.empty()) {
                    Violation v;
                    v.kind = ErrorKind::StrayEndTag;
                    v.token_index = i;
                    v.position = tok.position;
                    v.found = tok.name;
                    return v;
                }
                const Token& open = tokens[stack.back()];
                if (!same_name(open.name, tok.name)) {
                    Violation v;
                    v.kind = ErrorKind::MismatchedEndTag;
                    v.token_index = i;
                    v.position = tok.position;
                    v.expected = open.name;
                    v.expected_position = open.position;
                    v.found = tok.name;
                    return v;
                }
                stack.pop_back();
                break;
            }
            case TokenKind::EmptyTag:
            case TokenKind::Text:
                break;
        }
    }
    if (stack.empty()) return std::nullopt;

    Violation v;
    v.kind = ErrorKind::UnclosedTags;
    v.token_index = tokens.size();
    const Token& innermost = tokens[stack.back()];
    v.position = innermost.position;
    for (std::size_t idx : stack) v.open_tags.push_back(OpenTag{tokens[idx].name, tokens[idx].position});
    return v;
}

Error to_error(const Violation& v) {
    switch (v.kind) {
        case ErrorKind::MismatchedEndTag:
            return Error(v.kind, v.position,
                         "end tag </" + v.found + "> at " + where(v.position) + " does not match <" + v.expected +
                             "> opened at " + where(v.expected_position));
        case ErrorKind::StrayEndTag:
            return Error(v.kind, v.position, "end tag </" + v.found + "> at " + where(v.position) + " has no open tag");
        case ErrorKind::UnclosedTags: {
            std::string names;
            for (const auto& t : v.open_tags) {
                if (!names.empty()) names += ", ";
                names += t.name;
            }
            return Error(v.kind, v.position, "unclosed tags at end of input: " + names, v.open_tags);
        }
        default:
            return Error(v.kind, v.position, "not well-formed");
    }
}

}  // namespace whtmlgate::whtml
