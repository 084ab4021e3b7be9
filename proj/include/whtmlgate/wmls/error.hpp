#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace whtmlgate::wmls {

struct SourceLocation {
    std::size_t line = 1;
    std::size_t column = 1;
};

class CompileError : public std::runtime_error {
public:
    enum class Kind { Parse, Name, Arity, Limit };

    CompileError(Kind kind, SourceLocation loc, const std::string& message)
        : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
          kind_(kind),
          loc_(loc) {}

    Kind kind() const noexcept { return kind_; }
    SourceLocation location() const noexcept { return loc_; }

private:
    Kind kind_;
    SourceLocation loc_;
};

/// Bad magic, version, flags, truncation or trailing bytes in a `.wbc` file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structurally decodable module that breaks a bytecode invariant.
class VerifyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RuntimeError : public std::runtime_error {
public:
    enum class Kind { DivideByZero, TypeError, StackOverflow, FuelExhausted, NoSuchFunction, ArityMismatch };

    RuntimeError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

std::string_view to_string(CompileError::Kind kind) noexcept;
std::string_view to_string(RuntimeError::Kind kind) noexcept;

}  // namespace whtmlgate::wmls
