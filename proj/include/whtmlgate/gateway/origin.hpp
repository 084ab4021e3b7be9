#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "whtmlgate/net/server.hpp"
#include "whtmlgate/senv/envelope.hpp"

namespace whtmlgate::gateway {

inline constexpr std::string_view kWhtmlType = "application/x-whtml";
inline constexpr std::string_view kWmlsType = "application/x-wmls";
inline constexpr std::string_view kWbcType = "application/x-wbc";
inline constexpr std::string_view kBmpType = "image/bmp";
inline constexpr std::string_view kWbmpType = "image/vnd.wap.wbmp";

/// Content type by file extension; `application/octet-stream` otherwise.
std::string_view content_type_for(const std::filesystem::path& file);

struct OriginConfig {
    std::filesystem::path root;
    /// With a key, requests carrying an `application/x-senv` body are
    /// answered with the file sealed under that key.
    std::optional<std::vector<std::uint8_t>> key;
};

/// Static file handler. 400 for targets that are not a clean absolute path,
/// 404 for anything that is not a regular file under the root.
class Origin {
public:
    explicit Origin(OriginConfig config);

    net::HttpResponse handle(const net::HttpRequest& request);

private:
    net::HttpResponse handle_secure(const net::HttpRequest& request, const std::filesystem::path& file);

    OriginConfig config_;
    senv::ReplayGuard guard_;
};

class OriginServer {
public:
    OriginServer(OriginConfig config, const net::Endpoint& listen);

    void start() { server_.start(); }
    void run() { server_.run(); }
    void stop() { server_.stop(); }
    std::uint16_t port() const noexcept { return server_.port(); }
    net::Endpoint endpoint() const { return server_.endpoint(); }

private:
    Origin origin_;
    net::Server server_;
};

}  // namespace whtmlgate::gateway
