#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "whtmlgate/net/socket.hpp"

// The HTTP/1.1 subset spoken by the gateway, the origin and the client:
// one request per connection, Content-Length framing only, no chunked
// transfer coding, no keep-alive.

namespace whtmlgate::net {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Header {
    std::string name;
    std::string value;
};

using Headers = std::vector<Header>;

/// Case-insensitive lookup of the first header called `name`.
const std::string* find_header(const Headers& headers, std::string_view name);

struct Limits {
    std::size_t max_head = 16 * 1024;
    std::size_t max_body = 64 * 1024 * 1024;
};

struct HttpRequest {
    std::string method = "GET";
    std::string target;
    std::string version = "HTTP/1.1";
    Headers headers;
    std::vector<std::uint8_t> body;

    const std::string* header(std::string_view name) const { return find_header(headers, name); }

    /// Writes the head with a Content-Length computed from `body` (any
    /// Content-Length in `headers` is ignored).
    std::vector<std::uint8_t> serialize() const;
    /// The request line and headers only; `body` follows on the wire.
    std::vector<std::uint8_t> serialize_head() const;
};

struct HttpResponse {
    int status = 200;
    Headers headers;
    std::vector<std::uint8_t> body;

    const std::string* header(std::string_view name) const { return find_header(headers, name); }
    std::string content_type() const;

    /// Always emits Content-Length and `Connection: close`.
    std::vector<std::uint8_t> serialize() const;
    std::vector<std::uint8_t> serialize_head() const;

    static HttpResponse text(int status, std::string_view message);
    static HttpResponse bytes(int status, std::string_view content_type, std::vector<std::uint8_t> body);
};

std::string_view reason_phrase(int status) noexcept;

/// Reads one request. A missing Content-Length means an empty body.
/// Throws ProtocolError for malformed or oversized input and NetError for
/// transport failures.
HttpRequest read_request(Socket& socket, const Limits& limits = {});

/// Reads one response. Content-Length is mandatory.
HttpResponse read_response(Socket& socket, const Limits& limits = {});

/// Parses a request from a complete byte buffer.
HttpRequest parse_request(std::span<const std::uint8_t> bytes, const Limits& limits = {});

/// Connects, sends `request`, returns the response.
HttpResponse round_trip(const Endpoint& to, const HttpRequest& request,
                        std::chrono::milliseconds timeout = kDefaultTimeout, const Limits& limits = {});

}  // namespace whtmlgate::net
