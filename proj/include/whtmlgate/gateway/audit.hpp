#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "whtmlgate/senv/envelope.hpp"

namespace whtmlgate::gateway {

struct AuditRecord {
    std::chrono::system_clock::time_point timestamp;
    std::string event;
    std::optional<senv::SessionId> session_id;
    std::size_t plaintext_bytes_observed = 0;
};

/// Append-only, thread-safe record of secure-scheme traffic at the gateway.
/// Optionally mirrored to a file as tab-separated lines:
///   timestamp  event  session_id  plaintext_bytes_observed
class AuditLog {
public:
    AuditLog() = default;
    /// Also appends each record to `file` when one is given.
    explicit AuditLog(const std::optional<std::filesystem::path>& file);

    void record(std::string event, std::optional<senv::SessionId> session, std::size_t plaintext_bytes);

    std::vector<AuditRecord> records() const;
    std::size_t plaintext_total() const;
    std::size_t size() const;

    static std::string format(const AuditRecord& record);

private:
    mutable std::mutex mu_;
    std::vector<AuditRecord> records_;
    std::ofstream file_;
};

}  // namespace whtmlgate::gateway
