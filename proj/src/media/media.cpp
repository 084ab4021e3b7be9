#include "whtmlgate/media/media.hpp"

namespace whtmlgate::media {

namespace {

constexpr std::size_t kFileHeaderSize = 14;
constexpr std::size_t kInfoHeaderSize = 40;
constexpr std::uint32_t kPixelsPerMetre = 2835;  // 72 dpi

std::uint32_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return (299u * r + 587u * g + 114u * b) / 1000u;
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::size_t bmp_stride(std::uint32_t width) { return (static_cast<std::size_t>(width) * 3 + 3) & ~std::size_t{3}; }

[[noreturn]] void bmp_error(const std::string& msg) { throw MediaError(MediaError::Kind::FormatError, msg); }

}  // namespace

Bitmap::Bitmap(std::uint32_t width, std::uint32_t height) : Bitmap(width, height, {}) {}

Bitmap::Bitmap(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) throw MediaError(MediaError::Kind::InvalidBitmap, "bitmap dimensions must be at least 1x1");
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (pixels_.empty()) {
        pixels_.assign(count, 0);
    } else if (pixels_.size() != count) {
        throw MediaError(MediaError::Kind::InvalidBitmap, "pixel count does not match width x height");
    }
    for (auto& p : pixels_) p = p ? 1 : 0;
}

std::vector<std::uint8_t> encode_mbi(std::uint32_t n) {
    std::uint8_t groups[5];
    int count = 0;
    do {
        groups[count++] = static_cast<std::uint8_t>(n & 0x7F);
        n >>= 7;
    } while (n != 0);
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = count - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(groups[i] | (i > 0 ? 0x80 : 0)));
    return out;
}

std::pair<std::uint32_t, std::size_t> decode_mbi(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint64_t value = 0;
    for (std::size_t i = 0;; ++i) {
        if (i == 5) throw MediaError(MediaError::Kind::Overlong, "multi-byte integer longer than 5 bytes");
        if (offset + i >= bytes.size()) throw MediaError(MediaError::Kind::Truncated, "truncated multi-byte integer");
        const std::uint8_t b = bytes[offset + i];
        value = (value << 7) | (b & 0x7F);
        if ((b & 0x80) == 0) {
            if (value > 0xFFFFFFFFu) throw MediaError(MediaError::Kind::Overlong, "multi-byte integer exceeds 32 bits");
            return {static_cast<std::uint32_t>(value), i + 1};
        }
    }
}

std::size_t wbmp_size(std::uint32_t width, std::uint32_t height) {
    return encode_mbi(0).size() + 1 + encode_mbi(width).size() + encode_mbi(height).size() +
           (static_cast<std::size_t>(width) + 7) / 8 * height;
}

std::vector<std::uint8_t> encode_wbmp(const Bitmap& bitmap) {
    std::vector<std::uint8_t> out = encode_mbi(0);
    out.push_back(0x00);  // FixHeader
    const auto w = encode_mbi(bitmap.width());
    const auto h = encode_mbi(bitmap.height());
    out.insert(out.end(), w.begin(), w.end());
    out.insert(out.end(), h.begin(), h.end());

    const std::size_t row_bytes = (static_cast<std::size_t>(bitmap.width()) + 7) / 8;
    out.reserve(out.size() + row_bytes * bitmap.height());
    for (std::uint32_t y = 0; y < bitmap.height(); ++y) {
        std::uint8_t acc = 0;
        int filled = 0;
        for (std::uint32_t x = 0; x < bitmap.width(); ++x) {
            acc = static_cast<std::uint8_t>((acc << 1) | (bitmap.white(x, y) ? 1 : 0));
            if (++filled == 8) {
                out.push_back(acc);
                acc = 0;
                filled = 0;
            }
        }
        if (filled > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
    }
    return out;
}

Bitmap decode_wbmp(std::span<const std::uint8_t> bytes) {
    auto [type, n] = decode_mbi(bytes, 0);
    std::size_t pos = n;
    if (type != 0) throw MediaError(MediaError::Kind::UnsupportedType, "unsupported WBMP type " + std::to_string(type));
    if (pos >= bytes.size()) throw MediaError(MediaError::Kind::Truncated, "missing WBMP FixHeader");
    if (bytes[pos] != 0) throw MediaError(MediaError::Kind::UnsupportedType, "WBMP extension headers are not supported");
    ++pos;
    auto [width, wn] = decode_mbi(bytes, pos);
    pos += wn;
    auto [height, hn] = decode_mbi(bytes, pos);
    pos += hn;
    if (width == 0 || height == 0) throw MediaError(MediaError::Kind::InvalidBitmap, "WBMP has a zero dimension");

    const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
    const std::size_t available = bytes.size() - pos;
    if (available / row_bytes < height)
        throw MediaError(MediaError::Kind::Truncated, "WBMP pixel data shorter than " + std::to_string(row_bytes) + " x " +
                                                          std::to_string(height) + " bytes");

    Bitmap bitmap(width, height);
    for (std::uint32_t y = 0; y < height; ++y) {
        const std::size_t row = pos + y * row_bytes;
        for (std::uint32_t x = 0; x < width; ++x) {
            const std::uint8_t byte = bytes[row + x / 8];
            bitmap.set(x, y, (byte >> (7 - x % 8)) & 1);
        }
    }
    return bitmap;
}

Bitmap bmp_to_bitmap(std::span<const std::uint8_t> bytes, std::uint8_t threshold) {
    if (bytes.size() < kFileHeaderSize + kInfoHeaderSize) bmp_error("BMP shorter than its headers");
    if (bytes[0] != 'B' || bytes[1] != 'M') bmp_error("bad BMP magic");
    const std::uint32_t pixel_offset = le32(bytes, 10);
    const std::uint32_t info_size = le32(bytes, 14);
    if (info_size < kInfoHeaderSize) bmp_error("unsupported BMP info header size " + std::to_string(info_size));
    const auto raw_width = static_cast<std::int32_t>(le32(bytes, 18));
    const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
    const std::uint16_t bpp = le16(bytes, 28);
    const std::uint32_t compression = le32(bytes, 30);
    if (bpp != 24) bmp_error("unsupported BMP bit depth " + std::to_string(bpp));
    if (compression != 0) bmp_error("compressed BMP is not supported");
    if (raw_width <= 0 || raw_height == 0 || raw_height == INT32_MIN) bmp_error("invalid BMP dimensions");

    const auto width = static_cast<std::uint32_t>(raw_width);
    const bool top_down = raw_height < 0;
    const auto height = static_cast<std::uint32_t>(top_down ? -raw_height : raw_height);
    const std::size_t stride = bmp_stride(width);
    if (pixel_offset < kFileHeaderSize + kInfoHeaderSize || pixel_offset > bytes.size() ||
        (bytes.size() - pixel_offset) / stride < height)
        bmp_error("truncated BMP pixel array");

    Bitmap bitmap(width, height);
    for (std::uint32_t row = 0; row < height; ++row) {
        const std::uint32_t y = top_down ? row : height - 1 - row;
        const std::size_t base = pixel_offset + static_cast<std::size_t>(row) * stride;
        for (std::uint32_t x = 0; x < width; ++x) {
            const std::size_t p = base + static_cast<std::size_t>(x) * 3;
            // Stored as B, G, R.
            bitmap.set(x, y, luma(bytes[p + 2], bytes[p + 1], bytes[p]) >= threshold);
        }
    }
    return bitmap;
}

std::vector<std::uint8_t> bitmap_to_bmp(const Bitmap& bitmap) {
    const std::size_t stride = bmp_stride(bitmap.width());
    const std::size_t image_size = stride * bitmap.height();
    const std::size_t file_size = kFileHeaderSize + kInfoHeaderSize + image_size;
    if (file_size > 0xFFFFFFFFu) throw MediaError(MediaError::Kind::InvalidBitmap, "bitmap too large for BMP");

    std::vector<std::uint8_t> out;
    out.reserve(file_size);
    out.push_back('B');
    out.push_back('M');
    put32(out, static_cast<std::uint32_t>(file_size));
    put16(out, 0);
    put16(out, 0);
    put32(out, kFileHeaderSize + kInfoHeaderSize);

    put32(out, kInfoHeaderSize);
    put32(out, bitmap.width());
    put32(out, bitmap.height());
    put16(out, 1);   // planes
    put16(out, 24);  // bits per pixel
    put32(out, 0);   // BI_RGB
    put32(out, static_cast<std::uint32_t>(image_size));
    put32(out, kPixelsPerMetre);
    put32(out, kPixelsPerMetre);
    put32(out, 0);
    put32(out, 0);

    for (std::uint32_t row = 0; row < bitmap.height(); ++row) {
        const std::uint32_t y = bitmap.height() - 1 - row;
        for (std::uint32_t x = 0; x < bitmap.width(); ++x) {
            const std::uint8_t v = bitmap.white(x, y) ? 0xFF : 0x00;
            out.insert(out.end(), {v, v, v});
        }
        out.resize(out.size() + (stride - static_cast<std::size_t>(bitmap.width()) * 3), 0);
    }
    return out;
}

}  // namespace whtmlgate::media
