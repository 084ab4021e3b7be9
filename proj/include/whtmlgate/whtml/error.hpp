#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace whtmlgate::whtml {

struct Position {
    std::size_t byte_offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    friend bool operator==(const Position&, const Position&) = default;
};

enum class ErrorKind {
    Syntax,
    UnknownTag,
    CaseViolation,
    MismatchedEndTag,
    UnclosedTags,
    StrayEndTag,
    BadRoot,
    Registry,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// A tag that was still open when the input ended.
struct OpenTag {
    std::string name;
    Position position;
};

/// Every failure raised by the wHTML core. `position` is where the problem
/// was detected; `open_tags` is filled for UnclosedTags only.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, Position position, const std::string& message,
          std::vector<OpenTag> open_tags = {})
        : std::runtime_error(message),
          kind_(kind),
          position_(position),
          open_tags_(std::move(open_tags)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const Position& position() const noexcept { return position_; }
    const std::vector<OpenTag>& open_tags() const noexcept { return open_tags_; }

private:
    ErrorKind kind_;
    Position position_;
    std::vector<OpenTag> open_tags_;
};

}  // namespace whtmlgate::whtml
