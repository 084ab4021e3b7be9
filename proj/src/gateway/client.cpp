#include "whtmlgate/gateway/client.hpp"

#include <cstdlib>
#include <random>

#include "whtmlgate/net/http.hpp"

namespace whtmlgate::gateway {

net::Endpoint default_gateway() {
    if (const char* env = std::getenv("WHTML_GATEWAY"); env != nullptr && *env != '\0')
        return net::Endpoint::parse(env);
    return net::Endpoint{"127.0.0.1", 8080};
}

senv::SessionId random_session_id() {
    std::random_device rd;
    senv::SessionId id;
    for (auto& b : id) b = static_cast<std::uint8_t>(rd());
    return id;
}

FetchResult fetch(const net::Endpoint& gateway, const Url& url, std::chrono::milliseconds timeout) {
    net::HttpRequest req;
    req.target = url.str();
    req.headers.push_back({"Host", url.authority});
    auto resp = net::round_trip(gateway, req, timeout);
    return FetchResult{resp.status, resp.content_type(), std::move(resp.body)};
}

SecureFetchResult secure_fetch(const net::Endpoint& gateway, const Url& url, const std::vector<std::uint8_t>& key,
                               std::chrono::milliseconds timeout) {
    const senv::SessionKey session(key, random_session_id());
    net::HttpRequest req;
    req.target = url.str();
    req.headers.push_back({"Host", url.authority});
    req.headers.push_back({"Content-Type", senv::kContentType});
    req.body = senv::seal(session, 1, {}).serialize();

    auto resp = net::round_trip(gateway, req, timeout);
    SecureFetchResult out;
    out.status = resp.status;
    out.raw = std::move(resp.body);
    if (out.status == 200) out.plaintext = senv::open_unchecked(session, senv::SecureEnvelope::parse(out.raw));
    return out;
}

}  // namespace whtmlgate::gateway
