#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "whtmlgate/digest.hpp"
#include "whtmlgate/wmls/ast.hpp"
#include "whtmlgate/wmls/bytecode.hpp"

namespace whtmlgate::wmls {

struct ScriptSource {
    std::string text;

    std::uint64_t digest() const noexcept { return fnv1a64(text); }
};

/// Compiles the script subset to a verified module. Deterministic: the same
/// source always yields an identical module. Throws CompileError.
///
/// Variables are function-scoped and must be declared (as a parameter or
/// with `var`) before their first use in source order; all locals start as
/// Integer 0. A function that falls off its end returns Integer 0.
BytecodeModule compile(const ScriptSource& src);
BytecodeModule compile(const ast::Script& script);

/// Lowercase hex of the source digest; the name of its cached `.wbc` file.
std::string cache_key(const ScriptSource& src);

}  // namespace whtmlgate::wmls
