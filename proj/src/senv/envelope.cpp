#include "whtmlgate/senv/envelope.hpp"

#include <algorithm>
#include <cstring>

namespace whtmlgate::senv {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'E', 'N', 'V'};

void xor_stream(const std::vector<std::uint8_t>& key, std::uint64_t counter, std::span<const std::uint8_t> in,
                std::vector<std::uint8_t>& out) {
    std::uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter >> (8 * i));
    out.resize(in.size());
    const std::size_t klen = key.size();
    std::size_t k = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(in[i] ^ key[k] ^ ctr[i & 7]);
        if (++k == klen) k = 0;
    }
}

}  // namespace

std::string to_string(EnvelopeError::Kind kind) {
    switch (kind) {
        case EnvelopeError::Kind::BadMagic: return "BadMagic";
        case EnvelopeError::Kind::BadVersion: return "BadVersion";
        case EnvelopeError::Kind::Truncated: return "Truncated";
        case EnvelopeError::Kind::WrongSession: return "WrongSession";
        case EnvelopeError::Kind::ReplayDetected: return "ReplayDetected";
        case EnvelopeError::Kind::BadKey: return "BadKey";
    }
    return "EnvelopeError";
}

SessionKey::SessionKey(std::vector<std::uint8_t> key_bytes, SessionId id) : key(std::move(key_bytes)), session_id(id) {
    if (key.empty() || key.size() > 64) throw EnvelopeError(EnvelopeError::Kind::BadKey, "session key must be 1..64 bytes");
}

std::vector<std::uint8_t> SecureEnvelope::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + ciphertext.size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(kVersion);
    out.insert(out.end(), session_id.begin(), session_id.end());
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(counter >> (8 * i)));
    const auto len = static_cast<std::uint32_t>(ciphertext.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    out.insert(out.end(), ciphertext.begin(), ciphertext.end());
    return out;
}

SecureEnvelope SecureEnvelope::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw EnvelopeError(EnvelopeError::Kind::BadMagic, "not a SENV envelope");
    if (bytes.size() < kHeaderSize) throw EnvelopeError(EnvelopeError::Kind::Truncated, "envelope header truncated");
    if (bytes[4] != kVersion)
        throw EnvelopeError(EnvelopeError::Kind::BadVersion, "unsupported envelope version " + std::to_string(bytes[4]));
    SecureEnvelope env;
    std::copy_n(bytes.begin() + 5, 16, env.session_id.begin());
    for (int i = 0; i < 8; ++i) env.counter |= static_cast<std::uint64_t>(bytes[21 + i]) << (8 * i);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(bytes[29 + i]) << (8 * i);
    if (bytes.size() - kHeaderSize != len)
        throw EnvelopeError(EnvelopeError::Kind::Truncated, "envelope length field does not match its body");
    env.ciphertext.assign(bytes.begin() + kHeaderSize, bytes.end());
    return env;
}

SecureEnvelope seal(const SessionKey& key, std::uint64_t counter, std::span<const std::uint8_t> plaintext) {
    SecureEnvelope env;
    env.session_id = key.session_id;
    env.counter = counter;
    xor_stream(key.key, counter, plaintext, env.ciphertext);
    return env;
}

void ReplayGuard::accept(const SessionId& session, std::uint64_t counter) {
    std::lock_guard lock(mu_);
    auto it = last_.find(session);
    if (it != last_.end() && counter <= it->second)
        throw EnvelopeError(EnvelopeError::Kind::ReplayDetected,
                            "replayed envelope: counter " + std::to_string(counter) + " <= " + std::to_string(it->second));
    last_[session] = counter;
}

std::vector<std::uint8_t> open_unchecked(const SessionKey& key, const SecureEnvelope& env) {
    if (env.session_id != key.session_id)
        throw EnvelopeError(EnvelopeError::Kind::WrongSession, "envelope belongs to another session");
    std::vector<std::uint8_t> plain;
    xor_stream(key.key, env.counter, env.ciphertext, plain);
    return plain;
}

std::vector<std::uint8_t> open(const SessionKey& key, const SecureEnvelope& env, ReplayGuard& guard) {
    if (env.session_id != key.session_id)
        throw EnvelopeError(EnvelopeError::Kind::WrongSession, "envelope belongs to another session");
    guard.accept(env.session_id, env.counter);
    return open_unchecked(key, env);
}

std::vector<std::uint8_t> parse_hex_key(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.empty() || hex.size() % 2 != 0) throw EnvelopeError(EnvelopeError::Kind::BadKey, "key must be an even number of hex digits");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw EnvelopeError(EnvelopeError::Kind::BadKey, "key is not hex");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    if (out.size() > 64) throw EnvelopeError(EnvelopeError::Kind::BadKey, "session key must be 1..64 bytes");
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0xF];
    }
    return out;
}

}  // namespace whtmlgate::senv
