#include "whtmlgate/gateway/gateway.hpp"

#include <charconv>
#include <cstdlib>

#include "whtmlgate/gateway/origin.hpp"
#include "whtmlgate/media/media.hpp"
#include "whtmlgate/projector.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/wmls/error.hpp"

namespace whtmlgate::gateway {

namespace {

using net::HttpRequest;
using net::HttpResponse;

std::string as_string(const std::vector<std::uint8_t>& bytes) { return std::string(bytes.begin(), bytes.end()); }

std::vector<std::uint8_t> as_bytes(std::string_view s) { return std::vector<std::uint8_t>(s.begin(), s.end()); }

std::optional<std::uint8_t> parse_threshold(const std::string* header) {
    if (!header) return kDefaultWbmpThreshold;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(header->data(), header->data() + header->size(), v);
    if (header->empty() || ec != std::errc{} || ptr != header->data() + header->size() || v > 255) return std::nullopt;
    return static_cast<std::uint8_t>(v);
}

// 404 stays 404; any other non-200 origin status is a gateway failure.
HttpResponse origin_failure(const OriginResponse& r, const std::string& path) {
    if (r.status == 404) return HttpResponse::text(404, "origin has no " + path);
    return HttpResponse::text(502, "origin answered " + std::to_string(r.status) + " for " + path);
}

}  // namespace

std::string_view to_string(Mode mode) noexcept { return mode == Mode::Legacy ? "legacy" : "passthrough"; }

Mode parse_mode(std::string_view text) {
    if (text == "passthrough") return Mode::Passthrough;
    if (text == "legacy") return Mode::Legacy;
    throw std::invalid_argument("mode must be passthrough or legacy, not '" + std::string(text) + "'");
}

whtml::TagRegistry load_registry(const std::optional<std::filesystem::path>& path) {
    if (path) return whtml::TagRegistry::load_file(*path);
    if (const char* env = std::getenv("WHTML_REGISTRY"); env != nullptr && *env != '\0')
        return whtml::TagRegistry::load_file(env);
    return whtml::TagRegistry::builtin();
}

OriginResponse fetch_origin(const net::Endpoint& origin, const std::string& path, std::chrono::milliseconds timeout,
                            const std::vector<std::uint8_t>* body, std::string_view body_type) {
    HttpRequest req;
    req.target = path;
    req.headers.push_back({"Host", origin.str()});
    if (body != nullptr) {
        req.headers.push_back({"Content-Type", std::string(body_type)});
        req.body = *body;
    }
    HttpResponse resp = net::round_trip(origin, req, timeout);
    return OriginResponse{resp.status, resp.content_type(), std::move(resp.body)};
}

Gateway::Gateway(GatewayConfig config)
    : config_(std::move(config)),
      registry_(load_registry(config_.registry_path)),
      audit_(config_.audit_path),
      cache_(config_.cache_dir) {
    if (config_.mode == Mode::Legacy && (!config_.client_key || !config_.server_key))
        throw std::invalid_argument("legacy mode needs both a client key and a server key");
}

HttpResponse Gateway::handle_request(const HttpRequest& request) {
    if (request.method != "GET") return HttpResponse::text(400, "only GET is supported");
    Url url;
    try {
        url = parse_url(request.target);
    } catch (const UrlError& e) {
        return HttpResponse::text(400, e.what());
    }
    if (url.path.empty() || url.path.front() != '/') return HttpResponse::text(400, "bad path");
    if (!is_secure(url.scheme)) return handle_plain(request, url);
    if (config_.mode == Mode::Legacy && url.scheme == Scheme::Waps) return secure_legacy(request, url);
    return secure_passthrough(request, url);
}

HttpResponse Gateway::handle_plain(const HttpRequest& request, const Url& url) {
    const projector::Target target = profile_of(url.scheme);
    const auto threshold = parse_threshold(request.header("X-WBMP-Threshold"));
    if (!threshold) return HttpResponse::text(400, "X-WBMP-Threshold must be an integer in 0..255");

    OriginResponse origin;
    try {
        origin = fetch_origin(config_.origin, url.path, config_.timeout);
    } catch (const std::exception& e) {
        return HttpResponse::text(502, std::string("origin unreachable: ") + e.what());
    }
    if (origin.status != 200) return origin_failure(origin, url.path);

    if (origin.content_type == kWhtmlType) {
        try {
            const auto doc = whtml::parse(as_string(origin.body), registry_);
            const auto projected = projector::project(doc, target);
            return HttpResponse::bytes(200, projector::content_type(target), as_bytes(projector::serialize(projected)));
        } catch (const whtml::Error& e) {
            const auto& p = e.position();
            return HttpResponse::text(415, url.path + ":" + std::to_string(p.line) + ":" + std::to_string(p.column) +
                                               ": " + std::string(whtml::to_string(e.kind())) + ": " + e.what());
        } catch (const projector::ProjectionError& e) {
            return HttpResponse::text(415, url.path + ": " + e.what());
        }
    }
    if (origin.content_type == kBmpType && target == projector::Target::Wml) {
        try {
            const auto bitmap = media::bmp_to_bitmap(origin.body, *threshold);
            return HttpResponse::bytes(200, kWbmpType, media::encode_wbmp(bitmap));
        } catch (const media::MediaError& e) {
            return HttpResponse::text(415, url.path + ": " + e.what());
        }
    }
    if (origin.content_type == kWmlsType) {
        try {
            return HttpResponse::bytes(200, kWbcType, cache_.get_or_compile(wmls::ScriptSource{as_string(origin.body)}));
        } catch (const wmls::CompileError& e) {
            return HttpResponse::text(415, url.path + ":" + e.what());
        }
    }
    return HttpResponse::bytes(200, origin.content_type.empty() ? "application/octet-stream" : origin.content_type,
                               std::move(origin.body));
}

HttpResponse Gateway::secure_passthrough(const HttpRequest& request, const Url& url) {
    OriginResponse origin;
    try {
        origin = fetch_origin(config_.origin, url.path, config_.timeout, &request.body, senv::kContentType);
    } catch (const std::exception& e) {
        return HttpResponse::text(502, std::string("origin unreachable: ") + e.what());
    }
    audit_.record("forwarded", std::nullopt, 0);
    return HttpResponse::bytes(origin.status, origin.content_type, std::move(origin.body));
}

HttpResponse Gateway::secure_legacy(const HttpRequest& request, const Url& url) {
    senv::SecureEnvelope client_env;
    std::vector<std::uint8_t> plaintext;
    try {
        client_env = senv::SecureEnvelope::parse(request.body);
        const senv::SessionKey client_key(*config_.client_key, client_env.session_id);
        ++envelope_ops_;
        plaintext = senv::open(client_key, client_env, client_guard_);
    } catch (const senv::EnvelopeError& e) {
        return HttpResponse::text(400, senv::to_string(e.kind()) + ": " + e.what());
    }
    audit_.record("decrypted-request", client_env.session_id, plaintext.size());

    const senv::SessionKey server_key(*config_.server_key, client_env.session_id);
    ++envelope_ops_;
    const auto upstream = senv::seal(server_key, client_env.counter, plaintext).serialize();

    OriginResponse origin;
    try {
        origin = fetch_origin(config_.origin, url.path, config_.timeout, &upstream, senv::kContentType);
    } catch (const std::exception& e) {
        return HttpResponse::text(502, std::string("origin unreachable: ") + e.what());
    }
    if (origin.status != 200) return origin_failure(origin, url.path);

    try {
        const auto origin_env = senv::SecureEnvelope::parse(origin.body);
        ++envelope_ops_;
        const auto response_plain = senv::open(server_key, origin_env, server_guard_);
        audit_.record("decrypted-response", origin_env.session_id, response_plain.size());
        const senv::SessionKey client_key(*config_.client_key, client_env.session_id);
        ++envelope_ops_;
        return HttpResponse::bytes(200, senv::kContentType,
                                   senv::seal(client_key, origin_env.counter, response_plain).serialize());
    } catch (const senv::EnvelopeError& e) {
        return HttpResponse::text(502, "origin sent a bad envelope: " + std::string(e.what()));
    }
}

GatewayServer::GatewayServer(GatewayConfig config)
    : gateway_(std::move(config)),
      server_(gateway_.config().listen, [this](const HttpRequest& r) { return gateway_.handle_request(r); },
              gateway_.config().timeout) {}

}  // namespace whtmlgate::gateway
