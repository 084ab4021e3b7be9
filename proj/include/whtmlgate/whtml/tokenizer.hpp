#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "whtmlgate/whtml/error.hpp"

namespace whtmlgate::whtml {

enum class TokenKind { StartTag, EndTag, EmptyTag, Text };

struct Attribute {
    std::string name;
    std::string value;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Token {
    TokenKind kind = TokenKind::Text;
    std::string name;                   // as written; tags only
    std::vector<Attribute> attributes;  // start and empty tags only
    std::string text;                   // decoded character data; Text only
    Position position;
};

/// Splits UTF-8 markup into tags and text. Comments, `<?...?>` and
/// `<!DOCTYPE ...>` are consumed and dropped. Character references
/// (`&lt; &gt; &amp; &quot; &apos;` and numeric `&#..;`) are decoded in text
/// and attribute values. Throws Error(Syntax) on malformed input.
std::vector<Token> tokenize(std::string_view input);

}  // namespace whtmlgate::whtml
