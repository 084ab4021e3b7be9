#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "whtmlgate/wmls/bytecode.hpp"

namespace whtmlgate::wmls {

/// A VM value: Integer (64-bit, wrapping), String or Boolean.
struct Value {
    std::variant<std::int64_t, std::string, bool> v;

    static Value integer(std::int64_t i) { return Value{decltype(v)(std::in_place_type<std::int64_t>, i)}; }
    static Value string(std::string s) { return Value{decltype(v)(std::in_place_type<std::string>, std::move(s))}; }
    static Value boolean(bool b) { return Value{decltype(v)(std::in_place_type<bool>, b)}; }

    bool is_integer() const noexcept { return std::holds_alternative<std::int64_t>(v); }
    bool is_string() const noexcept { return std::holds_alternative<std::string>(v); }
    bool is_boolean() const noexcept { return std::holds_alternative<bool>(v); }

    /// Booleans are themselves, integers are true when non-zero, strings
    /// when non-empty.
    bool truthy() const noexcept;

    /// `42`, `"text"` (quoted), `true`.
    std::string to_display() const;

    friend bool operator==(const Value&, const Value&) = default;
};

inline constexpr std::size_t kMaxCallDepth = 256;

struct Execution {
    Value value;
    std::uint64_t steps = 0;  // instructions executed
};

/// Runs `entry` on a fresh operand stack. Each instruction costs one unit of
/// fuel. Arithmetic wraps on overflow; `/` truncates toward zero and `%`
/// takes the dividend's sign. Throws RuntimeError.
Execution run(const BytecodeModule& module, std::string_view entry, std::span<const Value> args,
              std::uint64_t fuel);

inline Value execute(const BytecodeModule& module, std::string_view entry, std::span<const Value> args,
                     std::uint64_t fuel) {
    return run(module, entry, args, fuel).value;
}

}  // namespace whtmlgate::wmls
