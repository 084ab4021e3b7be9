#pragma once

#include <string>
#include <vector>

#include "whtmlgate/gateway/url.hpp"
#include "whtmlgate/net/socket.hpp"
#include "whtmlgate/senv/envelope.hpp"

namespace whtmlgate::gateway {

/// Gateway address used by clients: $WHTML_GATEWAY, else 127.0.0.1:8080.
net::Endpoint default_gateway();

struct FetchResult {
    int status = 0;
    std::string content_type;
    std::vector<std::uint8_t> body;
};

/// Sends the absolute-form `GET <url> HTTP/1.1` to the gateway.
FetchResult fetch(const net::Endpoint& gateway, const Url& url,
                  std::chrono::milliseconds timeout = net::kDefaultTimeout);

struct SecureFetchResult {
    int status = 0;
    std::vector<std::uint8_t> plaintext;  // empty unless status is 200
    std::vector<std::uint8_t> raw;        // the response body as received
};

/// Seals an empty request under `key` with a fresh random session id and
/// counter 1, sends it, and opens a 200 response. Throws EnvelopeError when
/// the response envelope is malformed or belongs to another session.
SecureFetchResult secure_fetch(const net::Endpoint& gateway, const Url& url, const std::vector<std::uint8_t>& key,
                               std::chrono::milliseconds timeout = net::kDefaultTimeout);

senv::SessionId random_session_id();

}  // namespace whtmlgate::gateway
