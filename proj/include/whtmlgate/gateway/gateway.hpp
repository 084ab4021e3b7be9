#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "whtmlgate/gateway/audit.hpp"
#include "whtmlgate/gateway/cache.hpp"
#include "whtmlgate/gateway/url.hpp"
#include "whtmlgate/net/server.hpp"
#include "whtmlgate/whtml/registry.hpp"

namespace whtmlgate::gateway {

enum class Mode { Passthrough, Legacy };

std::string_view to_string(Mode mode) noexcept;
/// "passthrough" or "legacy"; throws std::invalid_argument.
Mode parse_mode(std::string_view text);

inline constexpr std::uint8_t kDefaultWbmpThreshold = 128;

struct GatewayConfig {
    net::Endpoint listen{"127.0.0.1", 8080};
    net::Endpoint origin{"127.0.0.1", 8081};
    Mode mode = Mode::Passthrough;
    std::filesystem::path cache_dir = "wbc-cache";
    std::optional<std::filesystem::path> registry_path;
    std::optional<std::filesystem::path> audit_path;
    /// Legacy mode only: the client-side and server-side session keys.
    std::optional<std::vector<std::uint8_t>> client_key;
    std::optional<std::vector<std::uint8_t>> server_key;
    std::chrono::milliseconds timeout = net::kDefaultTimeout;
};

/// `path` if given, else $WHTML_REGISTRY, else the built-in vocabulary.
whtml::TagRegistry load_registry(const std::optional<std::filesystem::path>& path);

struct OriginResponse {
    int status = 0;
    std::string content_type;
    std::vector<std::uint8_t> body;
};

/// `GET <path> HTTP/1.1` with a Host header over a fresh connection. An
/// optional body is sent with its Content-Type. Throws NetError or
/// ProtocolError.
OriginResponse fetch_origin(const net::Endpoint& origin, const std::string& path,
                            std::chrono::milliseconds timeout = net::kDefaultTimeout,
                            const std::vector<std::uint8_t>* body = nullptr, std::string_view body_type = {});

/// The request handler. Thread-safe; one instance serves all connections.
class Gateway {
public:
    explicit Gateway(GatewayConfig config);

    net::HttpResponse handle_request(const net::HttpRequest& request);

    const GatewayConfig& config() const noexcept { return config_; }
    const AuditLog& audit() const noexcept { return audit_; }
    BytecodeCache& cache() noexcept { return cache_; }
    const whtml::TagRegistry& registry() const noexcept { return registry_; }

    /// Number of seal/open calls made by this gateway.
    std::size_t envelope_ops() const noexcept { return envelope_ops_.load(); }

private:
    net::HttpResponse handle_plain(const net::HttpRequest& request, const Url& url);
    net::HttpResponse secure_passthrough(const net::HttpRequest& request, const Url& url);
    net::HttpResponse secure_legacy(const net::HttpRequest& request, const Url& url);

    GatewayConfig config_;
    whtml::TagRegistry registry_;
    AuditLog audit_;
    BytecodeCache cache_;
    senv::ReplayGuard client_guard_;
    senv::ReplayGuard server_guard_;
    std::atomic<std::size_t> envelope_ops_{0};
};

class GatewayServer {
public:
    explicit GatewayServer(GatewayConfig config);

    void start() { server_.start(); }
    void run() { server_.run(); }
    void stop() { server_.stop(); }
    std::uint16_t port() const noexcept { return server_.port(); }
    net::Endpoint endpoint() const { return server_.endpoint(); }
    Gateway& gateway() noexcept { return gateway_; }

private:
    Gateway gateway_;
    net::Server server_;
};

}  // namespace whtmlgate::gateway
