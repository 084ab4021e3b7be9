#include "whtmlgate/whtml/document.hpp"

#include <algorithm>

#include "whtmlgate/digest.hpp"
#include "whtmlgate/whtml/wellformed.hpp"

namespace whtmlgate::whtml {

namespace {

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

Element make_element(const Token& tok, const TagRegistry& registry) {
    Element e;
    try {
        TagClass cls = registry.classify(tok.name);
        e.name = std::move(cls.local_name);
        e.profile = cls.profile;
    } catch (const Error& err) {
        throw Error(err.kind(), tok.position,
                    std::string(err.what()) + " at line " + std::to_string(tok.position.line) + ", column " +
                        std::to_string(tok.position.column));
    }
    e.attributes = tok.attributes;
    return e;
}

[[noreturn]] void bad_root(const Position& at, const std::string& msg) { throw Error(ErrorKind::BadRoot, at, msg); }

void escape_text(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

void escape_attribute(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

}  // namespace

WhtmlDocument parse(std::string_view input, const TagRegistry& registry) {
    const std::vector<Token> tokens = tokenize(input);
    if (auto violation = check_well_formed(tokens)) throw to_error(*violation);

    // Open elements; the bottom entry is the root once it has been seen.
    std::vector<Element> open;
    std::optional<Element> root;

    for (const Token& tok : tokens) {
        const bool top_level = open.empty();
        if (top_level) {
            if (tok.kind == TokenKind::Text) {
                if (!is_blank(tok.text)) bad_root(tok.position, "text outside the whtml root element");
                continue;
            }
            // Only a start/empty tag can appear here: the check above guarantees
            // end tags are matched.
            if (root) bad_root(tok.position, "more than one top-level element");
            if (ascii_lower(tok.name) != kRootName)
                bad_root(tok.position, "root element must be <whtml>, found <" + tok.name + ">");
            Element r;
            r.name = std::string(kRootName);
            r.attributes = tok.attributes;
            if (tok.kind == TokenKind::EmptyTag) {
                root = std::move(r);
            } else {
                open.push_back(std::move(r));
            }
            continue;
        }

        switch (tok.kind) {
            case TokenKind::Text:
                open.back().children.push_back(Node{Text{tok.text}});
                break;
            case TokenKind::EmptyTag:
                open.back().children.push_back(Node{make_element(tok, registry)});
                break;
            case TokenKind::StartTag:
                open.push_back(make_element(tok, registry));
                break;
            case TokenKind::EndTag: {
                Element done = std::move(open.back());
                open.pop_back();
                if (open.empty()) {
                    root = std::move(done);
                } else {
                    open.back().children.push_back(Node{std::move(done)});
                }
                break;
            }
        }
    }
    if (!root) bad_root(Position{}, "document has no <whtml> root element");
    return WhtmlDocument(std::move(*root), fnv1a64(input));
}

void write_markup(std::string& out, const Element& element, bool with_prefixes) {
    const std::string name = (with_prefixes && !element.is_root()) ? prefixed_name(element.tag_class()) : element.name;
    out += '<';
    out += name;
    for (const auto& attr : element.attributes) {
        out += ' ';
        out += attr.name;
        out += "=\"";
        escape_attribute(out, attr.value);
        out += '"';
    }
    if (element.children.empty()) {
        out += "/>";
        return;
    }
    out += '>';
    for (const Node& child : element.children) {
        if (const Element* e = child.element()) write_markup(out, *e, with_prefixes);
        else escape_text(out, child.text()->content);
    }
    out += "</";
    out += name;
    out += '>';
}

std::string serialize_whtml(const WhtmlDocument& doc) {
    std::string out;
    write_markup(out, doc.root(), true);
    return out;
}

}  // namespace whtmlgate::whtml
