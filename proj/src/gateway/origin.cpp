#include "whtmlgate/gateway/origin.hpp"

#include <fstream>

namespace whtmlgate::gateway {

namespace {

using net::HttpRequest;
using net::HttpResponse;

// Splits the target into path segments, rejecting anything that could step
// outside the root.
std::optional<std::filesystem::path> safe_relative_path(std::string_view target) {
    if (target.empty() || target.front() != '/') return std::nullopt;
    if (const auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
    std::filesystem::path rel;
    std::size_t pos = 1;
    while (pos <= target.size()) {
        std::size_t end = target.find('/', pos);
        if (end == std::string_view::npos) end = target.size();
        const std::string_view seg = target.substr(pos, end - pos);
        pos = end + 1;
        if (seg.empty() || seg == ".") continue;
        if (seg == "..") return std::nullopt;
        for (char c : seg) {
            if (c == '\\' || c == '\0') return std::nullopt;
        }
        rel /= std::string(seg);
    }
    return rel;
}

std::optional<std::vector<std::uint8_t>> read_file(const std::filesystem::path& p) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) return std::nullopt;
    std::ifstream in(p, std::ios::binary | std::ios::ate);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) return std::nullopt;
    return bytes;
}

}  // namespace

std::string_view content_type_for(const std::filesystem::path& file) {
    const std::string ext = file.extension().string();
    if (ext == ".whtml") return kWhtmlType;
    if (ext == ".wmls") return kWmlsType;
    if (ext == ".wbc") return kWbcType;
    if (ext == ".bmp") return kBmpType;
    if (ext == ".wbmp") return kWbmpType;
    if (ext == ".senv") return senv::kContentType;
    return "application/octet-stream";
}

Origin::Origin(OriginConfig config) : config_(std::move(config)) {}

HttpResponse Origin::handle(const HttpRequest& request) {
    if (request.method != "GET") return HttpResponse::text(400, "only GET is supported");
    const auto rel = safe_relative_path(request.target);
    if (!rel) return HttpResponse::text(400, "bad request target '" + request.target + "'");
    const auto file = config_.root / *rel;

    const std::string* ctype = request.header("Content-Type");
    if (ctype && *ctype == senv::kContentType) return handle_secure(request, file);

    auto bytes = read_file(file);
    if (!bytes) return HttpResponse::text(404, "not found: " + request.target);
    return HttpResponse::bytes(200, content_type_for(file), std::move(*bytes));
}

HttpResponse Origin::handle_secure(const HttpRequest& request, const std::filesystem::path& file) {
    if (!config_.key) return HttpResponse::text(400, "secure request but no key is configured");
    try {
        const auto env = senv::SecureEnvelope::parse(request.body);
        const senv::SessionKey key(*config_.key, env.session_id);
        senv::open(key, env, guard_);
        auto bytes = read_file(file);
        if (!bytes) return HttpResponse::text(404, "not found: " + request.target);
        return HttpResponse::bytes(200, senv::kContentType, senv::seal(key, env.counter, *bytes).serialize());
    } catch (const senv::EnvelopeError& e) {
        return HttpResponse::text(400, senv::to_string(e.kind()) + ": " + e.what());
    }
}

OriginServer::OriginServer(OriginConfig config, const net::Endpoint& listen)
    : origin_(std::move(config)), server_(listen, [this](const HttpRequest& r) { return origin_.handle(r); }) {}

}  // namespace whtmlgate::gateway
