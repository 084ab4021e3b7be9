#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// NOT CRYPTOGRAPHY. The envelope cipher is a repeating XOR keystream. It
// exists so tests can observe where plaintext appears on the wire, and it
// provides no confidentiality or integrity whatsoever.

namespace whtmlgate::senv {

inline constexpr const char* kContentType = "application/x-senv";
inline constexpr std::uint8_t kVersion = 1;
/// magic(4) + version(1) + session_id(16) + counter(8) + length(4)
inline constexpr std::size_t kHeaderSize = 33;

using SessionId = std::array<std::uint8_t, 16>;

class EnvelopeError : public std::runtime_error {
public:
    enum class Kind { BadMagic, BadVersion, Truncated, WrongSession, ReplayDetected, BadKey };

    EnvelopeError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

std::string to_string(EnvelopeError::Kind kind);

struct SessionKey {
    std::vector<std::uint8_t> key;  // 1..64 bytes
    SessionId session_id{};

    /// Throws EnvelopeError(BadKey) for an empty or over-long key.
    SessionKey(std::vector<std::uint8_t> key_bytes, SessionId id);
};

/// Wire layout, integers little-endian:
///   "SENV" | version u8 | session_id[16] | counter u64 | length u32 | ciphertext
struct SecureEnvelope {
    SessionId session_id{};
    std::uint64_t counter = 0;
    std::vector<std::uint8_t> ciphertext;

    std::vector<std::uint8_t> serialize() const;

    /// Throws BadMagic, BadVersion or Truncated (also for trailing bytes).
    static SecureEnvelope parse(std::span<const std::uint8_t> bytes);

    friend bool operator==(const SecureEnvelope&, const SecureEnvelope&) = default;
};

/// ciphertext[i] = plaintext[i] ^ key[i % keylen] ^ counter_le[i % 8]
SecureEnvelope seal(const SessionKey& key, std::uint64_t counter, std::span<const std::uint8_t> plaintext);

/// Per-endpoint replay state: the highest counter accepted for each session.
/// Thread-safe.
class ReplayGuard {
public:
    /// Accepts `counter` if it is above every counter seen for `session`.
    /// Throws EnvelopeError(ReplayDetected) otherwise.
    void accept(const SessionId& session, std::uint64_t counter);

private:
    std::mutex mu_;
    std::map<SessionId, std::uint64_t> last_;
};

/// Decrypts without replay tracking. Throws WrongSession.
std::vector<std::uint8_t> open_unchecked(const SessionKey& key, const SecureEnvelope& env);

/// Decrypts and records the counter in `guard`. Throws WrongSession or
/// ReplayDetected.
std::vector<std::uint8_t> open(const SessionKey& key, const SecureEnvelope& env, ReplayGuard& guard);

/// Parses a hex string ("01ab...") into key bytes; throws BadKey.
std::vector<std::uint8_t> parse_hex_key(std::string_view hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace whtmlgate::senv
