#pragma once

#include <cstddef>
#include <string_view>

namespace whtmlgate {

/// True if `input` is well-formed UTF-8 (no overlongs, surrogates or
/// code points above U+10FFFF). On failure `bad_offset` gets the byte offset.
bool is_valid_utf8(std::string_view input, std::size_t* bad_offset = nullptr) noexcept;

}  // namespace whtmlgate
