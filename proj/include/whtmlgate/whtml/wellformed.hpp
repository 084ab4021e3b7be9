#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whtmlgate/whtml/error.hpp"
#include "whtmlgate/whtml/tokenizer.hpp"

namespace whtmlgate::whtml {

/// The first well-formedness violation in a token stream.
///
/// `token_index` is the index of the offending end tag, or the stream length
/// for UnclosedTags. For MismatchedEndTag, `expected` is the open tag on top
/// of the stack and `found` the end tag that arrived.
struct Violation {
    ErrorKind kind = ErrorKind::MismatchedEndTag;
    std::size_t token_index = 0;
    Position position;
    std::string expected;
    Position expected_position;
    std::string found;
    std::vector<OpenTag> open_tags;  // outermost first; UnclosedTags only
};

/// Single-pass stack check. Start tags push, end tags pop and must match the
/// top (case-insensitively), empty tags are a push immediately followed by a
/// pop, text is ignored. The stack must be empty at the end.
std::optional<Violation> check_well_formed(std::span<const Token> tokens);

/// Converts a violation into the exception the parser throws.
Error to_error(const Violation& violation);

}  // namespace whtmlgate::whtml
