#include "whtmlgate/gateway/audit.hpp"

#include <ctime>
#include <stdexcept>

namespace whtmlgate::gateway {

AuditLog::AuditLog(const std::optional<std::filesystem::path>& file) {
    if (!file) return;
    file_.open(*file, std::ios::app);
    if (!file_) throw std::runtime_error("cannot open audit log " + file->string());
}

void AuditLog::record(std::string event, std::optional<senv::SessionId> session, std::size_t plaintext_bytes) {
    AuditRecord r{std::chrono::system_clock::now(), std::move(event), session, plaintext_bytes};
    std::lock_guard lock(mu_);
    if (file_.is_open()) {
        file_ << format(r) << '\n';
        file_.flush();
    }
    records_.push_back(std::move(r));
}

std::vector<AuditRecord> AuditLog::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t AuditLog::plaintext_total() const {
    std::lock_guard lock(mu_);
    std::size_t total = 0;
    for (const auto& r : records_) total += r.plaintext_bytes_observed;
    return total;
}

std::size_t AuditLog::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

std::string AuditLog::format(const AuditRecord& record) {
    const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(record.timestamp);
    const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(record.timestamp - secs).count();
    const std::time_t t = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", &tm);
    char frac[8];
    std::snprintf(frac, sizeof frac, ".%03dZ", static_cast<int>(millis));

    std::string line = std::string(stamp) + frac + '\t' + record.event + '\t';
    line += record.session_id ? senv::to_hex(*record.session_id) : "-";
    line += '\t' + std::to_string(record.plaintext_bytes_observed);
    return line;
}

}  // namespace whtmlgate::gateway
