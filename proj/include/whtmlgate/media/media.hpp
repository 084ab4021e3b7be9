#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace whtmlgate::media {

inline constexpr const char* kWbmpContentType = "image/vnd.wap.wbmp";
inline constexpr const char* kBmpContentType = "image/bmp";

class MediaError : public std::runtime_error {
public:
    enum class Kind { Truncated, Overlong, UnsupportedType, FormatError, InvalidBitmap };

    MediaError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// A monochrome raster, row-major, top row first; 1 = white, 0 = black.
class Bitmap {
public:
    /// All-black bitmap. Throws MediaError(InvalidBitmap) for a zero dimension.
    Bitmap(std::uint32_t width, std::uint32_t height);
    Bitmap(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels);

    std::uint32_t width() const noexcept { return width_; }
    std::uint32_t height() const noexcept { return height_; }

    bool white(std::uint32_t x, std::uint32_t y) const { return pixels_[index(x, y)] != 0; }
    void set(std::uint32_t x, std::uint32_t y, bool white) { pixels_[index(x, y)] = white ? 1 : 0; }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const Bitmap&, const Bitmap&) = default;

private:
    std::size_t index(std::uint32_t x, std::uint32_t y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    std::uint32_t width_;
    std::uint32_t height_;
    std::vector<std::uint8_t> pixels_;
};

// WBMP multi-byte integers: big-endian 7-bit groups, high bit set on every
// byte but the last.
std::vector<std::uint8_t> encode_mbi(std::uint32_t n);

/// Returns (value, bytes consumed). Throws Truncated or Overlong (more than
/// five bytes, or a value above 32 bits).
std::pair<std::uint32_t, std::size_t> decode_mbi(std::span<const std::uint8_t> bytes, std::size_t offset);

/// Type 0 WBMP: TypeField 0, FixHeader 0, width, height, then rows padded to
/// whole bytes, most significant bit first.
std::vector<std::uint8_t> encode_wbmp(const Bitmap& bitmap);
Bitmap decode_wbmp(std::span<const std::uint8_t> bytes);

/// Predicted size of encode_wbmp's output.
std::size_t wbmp_size(std::uint32_t width, std::uint32_t height);

/// Reads an uncompressed 24-bit BMP and thresholds it: a pixel is white
/// when (299 R + 587 G + 114 B) / 1000 >= threshold.
Bitmap bmp_to_bitmap(std::span<const std::uint8_t> bytes, std::uint8_t threshold);

/// Writes an uncompressed 24-bit bottom-up BMP of pure black and white.
std::vector<std::uint8_t> bitmap_to_bmp(const Bitmap& bitmap);

}  // namespace whtmlgate::media
