#include "whtmlgate/net/http.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace whtmlgate::net {

namespace {

using ReadFn = std::function<std::size_t(std::span<std::uint8_t>)>;

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_token_char(char c) {
    if (c >= 'a' && c <= 'z') return true;
    if (c >= 'A' && c <= 'Z') return true;
    if (c >= '0' && c <= '9') return true;
    return std::string_view("!#$%&'*+-.^_`|~").find(c) != std::string_view::npos;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

struct RawMessage {
    std::string start_line;
    Headers headers;
    std::vector<std::uint8_t> body;
};

void append(std::vector<std::uint8_t>& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

std::optional<std::size_t> content_length(const Headers& headers) {
    std::optional<std::size_t> result;
    for (const auto& h : headers) {
        if (!iequals(h.name, "Content-Length")) continue;
        std::size_t v = 0;
        const auto* b = h.value.data();
        const auto* e = b + h.value.size();
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (h.value.empty() || ec != std::errc{} || ptr != e) throw ProtocolError("bad Content-Length '" + h.value + "'");
        if (result && *result != v) throw ProtocolError("conflicting Content-Length headers");
        result = v;
    }
    return result;
}

RawMessage read_message(const ReadFn& read, const Limits& limits, bool body_requires_length) {
    std::vector<std::uint8_t> buf;
    std::size_t head_end = 0;
    std::size_t scanned = 0;
    std::uint8_t chunk[16 * 1024];
    for (;;) {
        const std::string_view view(reinterpret_cast<const char*>(buf.data()), buf.size());
        const std::size_t from = scanned >= 3 ? scanned - 3 : 0;
        const std::size_t at = view.find("\r\n\r\n", from);
        if (at != std::string_view::npos) {
            head_end = at + 4;
            break;
        }
        scanned = buf.size();
        if (buf.size() > limits.max_head) throw ProtocolError("header section too large");
        const std::size_t n = read(chunk);
        if (n == 0) throw ProtocolError(buf.empty() ? "connection closed before a message" : "connection closed mid-header");
        buf.insert(buf.end(), chunk, chunk + n);
    }
    if (head_end > limits.max_head) throw ProtocolError("header section too large");

    RawMessage msg;
    const std::string_view head(reinterpret_cast<const char*>(buf.data()), head_end - 4);
    std::size_t pos = 0;
    bool first = true;
    while (pos <= head.size()) {
        std::size_t eol = head.find("\r\n", pos);
        if (eol == std::string_view::npos) eol = head.size();
        const std::string_view line = head.substr(pos, eol - pos);
        pos = eol + 2;
        for (char c : line) {
            if (c == '\r' || c == '\n' || c == '\0') throw ProtocolError("stray control character in header section");
        }
        if (first) {
            msg.start_line = std::string(line);
            first = false;
            continue;
        }
        if (line.empty()) throw ProtocolError("empty header line");
        if (line.front() == ' ' || line.front() == '\t') throw ProtocolError("folded header lines are not supported");
        const auto colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0) throw ProtocolError("malformed header line");
        const std::string_view name = line.substr(0, colon);
        if (!std::all_of(name.begin(), name.end(), is_token_char)) throw ProtocolError("malformed header name");
        msg.headers.push_back(Header{std::string(name), std::string(trim(line.substr(colon + 1)))});
    }

    if (find_header(msg.headers, "Transfer-Encoding")) throw ProtocolError("transfer codings are not supported");
    const auto length = content_length(msg.headers);
    if (!length && body_requires_length) throw ProtocolError("missing Content-Length");
    const std::size_t want = length.value_or(0);
    if (want > limits.max_body) throw ProtocolError("body too large");

    // Bytes already buffered past the head, then the rest read in place.
    std::size_t have = std::min(buf.size(), head_end + want) - head_end;
    msg.body.resize(want);
    std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(head_end), have, msg.body.begin());
    while (have < want) {
        const std::size_t n = read(std::span(msg.body.data() + have, want - have));
        if (n == 0) throw ProtocolError("connection closed mid-body");
        have += n;
    }
    return msg;
}

HttpRequest to_request(RawMessage msg) {
    HttpRequest req;
    const std::string_view line = msg.start_line;
    const auto sp1 = line.find(' ');
    const auto sp2 = sp1 == std::string_view::npos ? sp1 : line.find(' ', sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos || line.find(' ', sp2 + 1) != std::string_view::npos)
        throw ProtocolError("malformed request line");
    req.method = std::string(line.substr(0, sp1));
    req.target = std::string(line.substr(sp1 + 1, sp2 - sp1 - 1));
    req.version = std::string(line.substr(sp2 + 1));
    if (req.method.empty() || !std::all_of(req.method.begin(), req.method.end(), is_token_char))
        throw ProtocolError("malformed method");
    if (req.target.empty()) throw ProtocolError("empty request target");
    if (req.version != "HTTP/1.1" && req.version != "HTTP/1.0") throw ProtocolError("unsupported HTTP version");
    req.headers = std::move(msg.headers);
    req.body = std::move(msg.body);
    return req;
}

}  // namespace

const std::string* find_header(const Headers& headers, std::string_view name) {
    for (const auto& h : headers) {
        if (iequals(h.name, name)) return &h.value;
    }
    return nullptr;
}

std::string_view reason_phrase(int status) noexcept {
    switch (status) {
        case 200: return "OK";
        case 400: return "Bad Request";
        case 404: return "Not Found";
        case 415: return "Unsupported Media Type";
        case 500: return "Internal Server Error";
        case 502: return "Bad Gateway";
        default: return "Unknown";
    }
}

std::vector<std::uint8_t> HttpRequest::serialize_head() const {
    std::vector<std::uint8_t> out;
    append(out, method + " " + target + " " + version + "\r\n");
    for (const auto& h : headers) {
        if (iequals(h.name, "Content-Length")) continue;
        append(out, h.name + ": " + h.value + "\r\n");
    }
    if (!body.empty() || method != "GET") append(out, "Content-Length: " + std::to_string(body.size()) + "\r\n");
    append(out, "\r\n");
    return out;
}

std::vector<std::uint8_t> HttpRequest::serialize() const {
    auto out = serialize_head();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::string HttpResponse::content_type() const {
    const std::string* ct = header("Content-Type");
    if (!ct) return {};
    const auto semi = ct->find(';');
    return std::string(trim(std::string_view(*ct).substr(0, semi)));
}

std::vector<std::uint8_t> HttpResponse::serialize_head() const {
    std::vector<std::uint8_t> out;
    append(out, "HTTP/1.1 " + std::to_string(status) + " " + std::string(reason_phrase(status)) + "\r\n");
    for (const auto& h : headers) {
        if (iequals(h.name, "Content-Length") || iequals(h.name, "Connection")) continue;
        append(out, h.name + ": " + h.value + "\r\n");
    }
    append(out, "Content-Length: " + std::to_string(body.size()) + "\r\nConnection: close\r\n\r\n");
    return out;
}

std::vector<std::uint8_t> HttpResponse::serialize() const {
    auto out = serialize_head();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

HttpResponse HttpResponse::text(int status, std::string_view message) {
    std::string body(message);
    if (body.empty() || body.back() != '\n') body += '\n';
    return bytes(status, "text/plain; charset=utf-8", std::vector<std::uint8_t>(body.begin(), body.end()));
}

HttpResponse HttpResponse::bytes(int status, std::string_view content_type, std::vector<std::uint8_t> body) {
    HttpResponse r;
    r.status = status;
    r.headers.push_back(Header{"Content-Type", std::string(content_type)});
    r.body = std::move(body);
    return r;
}

HttpRequest read_request(Socket& socket, const Limits& limits) {
    return to_request(read_message([&](std::span<std::uint8_t> b) { return socket.read_some(b); }, limits, false));
}

HttpRequest parse_request(std::span<const std::uint8_t> bytes, const Limits& limits) {
    std::size_t offset = 0;
    auto read = [&](std::span<std::uint8_t> b) {
        const std::size_t n = std::min(b.size(), bytes.size() - offset);
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(offset), n, b.begin());
        offset += n;
        return n;
    };
    return to_request(read_message(read, limits, false));
}

HttpResponse read_response(Socket& socket, const Limits& limits) {
    RawMessage msg = read_message([&](std::span<std::uint8_t> b) { return socket.read_some(b); }, limits, true);
    const std::string_view line = msg.start_line;
    if (!line.starts_with("HTTP/1.1 ") && !line.starts_with("HTTP/1.0 ")) throw ProtocolError("malformed status line");
    const std::string_view code = line.substr(9, 3);
    int status = 0;
    auto [ptr, ec] = std::from_chars(code.data(), code.data() + code.size(), status);
    if (code.size() != 3 || ec != std::errc{} || ptr != code.data() + 3 || status < 100 ||
        (line.size() > 12 && line[12] != ' '))
        throw ProtocolError("malformed status line");
    HttpResponse r;
    r.status = status;
    r.headers = std::move(msg.headers);
    r.body = std::move(msg.body);
    return r;
}

HttpResponse round_trip(const Endpoint& to, const HttpRequest& request, std::chrono::milliseconds timeout,
                        const Limits& limits) {
    Socket s = Socket::connect(to, timeout);
    s.write_all(request.serialize_head());
    s.write_all(request.body);
    return read_response(s, limits);
}

}  // namespace whtmlgate::net
