// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "fixtures.hpp"
#include "generators.hpp"
#include "reference_matcher.hpp"
#include "script_oracle.hpp"
#include "whtmlgate/gateway/client.hpp"
#include "whtmlgate/media/media.hpp"
#include "whtmlgate/net/server.hpp"
#include "whtmlgate/projector.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/whtml/wellformed.hpp"
#include "whtmlgate/wmls/compiler.hpp"

using namespace whtmlgate;
using Clock = std::chrono::steady_clock;
using Bytes = std::vector<std::uint8_t>;

namespace {

// Pinned tolerances.
constexpr double kOracleSeconds = 10.0;
constexpr double kProjectRatioMax = 5.0;
constexpr double kRelayRatioMin = 2.0;
constexpr double kBenchmarkSeconds = 60.0;

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict oracle_equivalence() {
    testsupport::Rng rng(1001);
    const auto start = Clock::now();
    std::size_t agree = 0, violations = 0;
    constexpr std::size_t kStreams = 10'000;
    for (std::size_t i = 0; i < kStreams; ++i) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 10'000)(rng);
        const auto tokens = testsupport::random_token_stream(rng, len, 50);
        const auto got = whtml::check_well_formed(tokens);
        const auto want = testsupport::reference_match(tokens);
        violations += !want.well_formed;
        const bool same = got ? (!want.well_formed && got->kind == want.kind && got->token_index == want.token_index)
                              : want.well_formed;
        agree += same;
    }
    const double secs = seconds_since(start);
    return {agree == kStreams && secs < kOracleSeconds,
            fmt("%zu/%zu streams agree (%zu ill-formed), %.2f s (limit %.0f s)", agree, kStreams, violations, secs,
                kOracleSeconds)};
}

std::vector<std::string> tag_names(std::string_view markup) {
    std::vector<std::string> out;
    for (const auto& tok : whtml::tokenize(markup)) {
        if (tok.kind == whtml::TokenKind::Text) continue;
        std::string n = tok.name;
        for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(n);
    }
    return out;
}

Verdict projection_purity() {
    testsupport::Rng rng(1002);
    const auto& reg = whtml::TagRegistry::builtin();
    std::size_t bad = 0;
    constexpr int kDocs = 1000;
    for (int i = 0; i < kDocs; ++i) {
        const auto doc = whtml::parse(testsupport::random_whtml(rng, reg, 60));
        const auto html = tag_names(projector::serialize(projector::project(doc, projector::Target::Html)));
        const auto wml = tag_names(projector::serialize(projector::project(doc, projector::Target::Wml)));
        for (std::size_t k = 1; k < html.size(); ++k) bad += reg.is_wml_only(html[k]);
        for (std::size_t k = 1; k < wml.size(); ++k) bad += reg.is_html_only(wml[k]);
    }
    return {bad == 0, fmt("%d documents, %zu opposite-profile tags after projection", kDocs, bad)};
}

// Sits between the gateway and the real origin and records the raw bodies.
class RecordingOrigin {
public:
    RecordingOrigin(const std::filesystem::path& root, Bytes key)
        : origin_(gateway::OriginConfig{root, std::move(key)}),
          server_({"127.0.0.1", 0}, [this](const net::HttpRequest& r) {
              auto resp = origin_.handle(r);
              std::lock_guard lock(mu_);
              requests.push_back(r.body);
              responses.push_back(resp.body);
              return resp;
          }) {
        server_.start();
    }
    ~RecordingOrigin() { server_.stop(); }
    net::Endpoint endpoint() const { return server_.endpoint(); }

    std::vector<Bytes> requests, responses;

private:
    std::mutex mu_;
    gateway::Origin origin_;
    net::Server server_;
};

Verdict security_gap() {
    testsupport::TempDir site, cache;
    testsupport::write_file(site / "hello.whtml", testsupport::kHelloDoc);
    const Bytes client_key{0xC0, 0xFF, 0xEE}, server_key{0x5E, 0xC2};
    const Bytes request_plain = testsupport::bytes_of("GET /hello.whtml");
    const std::size_t expected = request_plain.size() + testsupport::kHelloDoc.size();

    auto request_for = [&](const Bytes& key, std::uint8_t sid) {
        senv::SessionId id{};
        id.fill(sid);
        net::HttpRequest req;
        req.target = "waps://example.test/hello.whtml";
        req.headers.push_back({"Content-Type", senv::kContentType});
        req.body = senv::seal(senv::SessionKey(key, id), 1, request_plain).serialize();
        return req;
    };

    // Legacy: the gateway holds both keys and sees the plaintext.
    std::size_t legacy_seen = 0;
    bool legacy_ok = false;
    {
        RecordingOrigin origin(site.path(), server_key);
        gateway::GatewayConfig cfg;
        cfg.listen = {"127.0.0.1", 0};
        cfg.origin = origin.endpoint();
        cfg.cache_dir = cache / "legacy";
        cfg.mode = gateway::Mode::Legacy;
        cfg.client_key = client_key;
        cfg.server_key = server_key;
        gateway::GatewayServer gw(cfg);
        gw.start();
        const auto req = request_for(client_key, 0x11);
        const auto resp = net::round_trip(gw.endpoint(), req);
        legacy_seen = gw.gateway().audit().plaintext_total();
        if (resp.status == 200) {
            senv::SessionId id{};
            id.fill(0x11);
            const auto plain = senv::open_unchecked(senv::SessionKey(client_key, id), senv::SecureEnvelope::parse(resp.body));
            legacy_ok = testsupport::text_of(plain) == testsupport::kHelloDoc;
        }
        gw.stop();
    }

    // Passthrough: one key end to end, the gateway only relays.
    std::size_t pass_seen = 1;
    bool identical = false;
    {
        RecordingOrigin origin(site.path(), client_key);
        gateway::GatewayConfig cfg;
        cfg.listen = {"127.0.0.1", 0};
        cfg.origin = origin.endpoint();
        cfg.cache_dir = cache / "passthrough";
        gateway::GatewayServer gw(cfg);
        gw.start();
        const auto req = request_for(client_key, 0x22);
        const auto resp = net::round_trip(gw.endpoint(), req);
        pass_seen = gw.gateway().audit().plaintext_total();
        identical = resp.status == 200 && origin.requests.size() == 1 && origin.requests[0] == req.body &&
                    origin.responses[0] == resp.body;
        gw.stop();
    }

    const bool pass = legacy_ok && legacy_seen == expected && expected > 0 && pass_seen == 0 && identical;
    return {pass, fmt("legacy observed %zu of %zu plaintext bytes; passthrough observed %zu, relay %s", legacy_seen,
                      expected, pass_seen, identical ? "bit-identical" : "ALTERED")};
}

Verdict bytecode_reuse() {
    testsupport::TempDir site, cache;
    const std::string script = "function main(n) { var s = 0; while (n > 0) { s = s + n; n = n - 1; } return s; }";
    testsupport::write_file(site / "sum.wmls", script);
    testsupport::Rng rng(1004);
    std::vector<std::pair<std::string, std::size_t>> corpus;
    for (int i = 0; i < 50; ++i) {
        std::size_t arity = 0;
        corpus.emplace_back(testsupport::random_script(rng, arity), arity);
        testsupport::write_file(site / ("c" + std::to_string(i) + ".wmls"), corpus.back().first);
    }

    testsupport::LiveStack stack(site.path(), cache.path(), {});
    const auto url = gateway::parse_url("wap://example.test/sum.wmls");
    Bytes first;
    std::size_t identical = 0;
    for (int i = 0; i < 100; ++i) {
        const auto r = gateway::fetch(stack.gateway_endpoint(), url);
        if (i == 0) first = r.body;
        identical += r.status == 200 && r.content_type == "application/x-wbc" && r.body == first;
    }
    const std::size_t compiles = stack.gateway().cache().compile_count();

    std::size_t agree = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& [src, arity] = corpus[i];
        std::vector<wmls::Value> args;
        for (std::size_t k = 0; k < arity; ++k) args.push_back(wmls::Value::integer(static_cast<std::int64_t>(k) * 3 - 4));
        const auto r = gateway::fetch(stack.gateway_endpoint(),
                                      gateway::parse_url("wap://example.test/c" + std::to_string(i) + ".wmls"));
        if (r.status != 200) continue;
        const auto decoded = testsupport::run_vm(wmls::decode_module(r.body), "main", args);
        const auto fresh = testsupport::run_vm(wmls::compile(wmls::ScriptSource{src}), "main", args);
        const auto oracle = testsupport::interpret(wmls::ast::parse_script(src), "main", args);
        agree += decoded == fresh && fresh == oracle;
    }
    return {compiles == 1 && identical == 100 && agree == corpus.size(),
            fmt("%zu compile(s), %zu/100 identical .wbc responses, %zu/%zu scripts agree with the oracle", compiles,
                identical, agree, corpus.size())};
}

Verdict codecs() {
    std::size_t bad = 0;
    auto white = [](std::uint32_t w, std::uint32_t h, std::vector<std::pair<int, int>> on) {
        media::Bitmap b(w, h);
        for (auto [x, y] : on) b.set(x, y, true);
        return b;
    };
    bad += media::encode_wbmp(white(1, 1, {{0, 0}})) != Bytes{0x00, 0x00, 0x01, 0x01, 0x80};
    bad += media::encode_wbmp(white(2, 1, {{1, 0}})) != Bytes{0x00, 0x00, 0x02, 0x01, 0x40};
    bad += media::encode_wbmp(media::Bitmap(9, 1, Bytes(9, 1))) != Bytes{0x00, 0x00, 0x09, 0x01, 0xFF, 0x80};
    bad += media::encode_mbi(200) != Bytes{0x81, 0x48};
    const std::size_t vector_bad = bad;

    for (std::uint32_t n = 0; n <= (1u << 20); ++n) {
        const auto b = media::encode_mbi(n);
        const auto [v, used] = media::decode_mbi(b, 0);
        bad += v != n || used != b.size();
    }
    const std::size_t mbi_bad = bad - vector_bad;

    testsupport::Rng rng(1005);
    for (int i = 0; i < 1000; ++i) {
        const auto b = testsupport::random_bitmap(rng, 16, 16);
        bad += media::decode_wbmp(media::encode_wbmp(b)) != b;
        bad += media::bmp_to_bitmap(media::bitmap_to_bmp(b), 128) != b;
    }
    return {bad == 0, fmt("%zu vector, %zu MBI (0..2^20), %zu bitmap round-trip mismatches", vector_bad, mbi_bad,
                          bad - vector_bad - mbi_bad)};
}

double best_of(int runs, const std::function<void()>& fn) {
    double best = 1e30;
    for (int i = 0; i < runs; ++i) {
        const auto t = Clock::now();
        fn();
        best = std::min(best, seconds_since(t));
    }
    return best;
}

Verdict overhead() {
    const auto start = Clock::now();

    // (a) parse vs parse+project on a 100 KiB document.
    testsupport::Rng rng(1006);
    std::string doc = "<whtml>";
    while (doc.size() < 100 * 1024) {
        const auto part = testsupport::random_whtml(rng, whtml::TagRegistry::builtin(), 80);
        doc += part.substr(7, part.size() - 7 - 8);  // strip the root tags
    }
    doc += "</whtml>";
    const double parse_only = best_of(15, [&] { (void)whtml::parse(doc); });
    const double parse_project = best_of(15, [&] {
        (void)projector::serialize(projector::project(whtml::parse(doc), projector::Target::Wml));
    });
    const double project_ratio = parse_project / parse_only;

    // (b) relay throughput with 1 MiB envelopes in both directions. The origin
    // answers every request with a response sealed in advance, so its cost is
    // pure I/O and identical for both modes; the difference is the gateway's.
    const Bytes payload = testsupport::random_bytes(rng, 1 << 20);
    const Bytes key{0x0A, 0x0B, 0x0C, 0x0D};
    constexpr int kRequests = 40;
    const auto session = gateway::random_session_id();
    const senv::SessionKey session_key(key, session);
    std::vector<Bytes> sealed;  // index = counter
    for (int i = 0; i <= kRequests + 1; ++i)
        sealed.push_back(senv::seal(session_key, static_cast<std::uint64_t>(i), payload).serialize());

    net::Server origin(net::Endpoint{"127.0.0.1", 0}, [&](const net::HttpRequest& req) {
        const auto counter = senv::SecureEnvelope::parse(req.body).counter;
        if (counter >= sealed.size()) return net::HttpResponse::text(400, "unexpected counter");
        return net::HttpResponse::bytes(200, senv::kContentType, sealed[counter]);
    });
    origin.start();
    auto requests = [&] {
        std::vector<net::HttpRequest> out;
        for (int i = 1; i <= kRequests + 1; ++i) {
            net::HttpRequest req;
            req.target = "waps://example.test/big.bin";
            req.headers.push_back({"Content-Type", senv::kContentType});
            req.body = sealed[static_cast<std::size_t>(i)];
            out.push_back(std::move(req));
        }
        return out;
    };
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    // Both gateways run side by side and requests alternate between them, so
    // background load hits the two modes alike.
    double passthrough = 0, legacy = 0;
    std::string error;
    try {
        testsupport::TempDir cache, cache2;
        auto make_gateway = [&](gateway::Mode mode, const std::filesystem::path& dir) {
            gateway::GatewayConfig cfg;
            cfg.listen = net::Endpoint{"127.0.0.1", 0};
            cfg.origin = origin.endpoint();
            cfg.mode = mode;
            cfg.cache_dir = dir;
            if (mode == gateway::Mode::Legacy) cfg.client_key = cfg.server_key = key;
            auto gw = std::make_unique<gateway::GatewayServer>(std::move(cfg));
            gw->start();
            return gw;
        };
        const auto pass_gw = make_gateway(gateway::Mode::Passthrough, cache.path());
        const auto legacy_gw = make_gateway(gateway::Mode::Legacy, cache2.path());
        const auto pass_reqs = requests();
        const auto legacy_reqs = requests();
        auto timed = [&](const net::Endpoint& gw, const net::HttpRequest& req) {
            const auto t = Clock::now();
            const auto resp = net::round_trip(gw, req);
            const double secs = seconds_since(t);
            if (resp.status != 200) throw std::runtime_error("relay failed with status " + std::to_string(resp.status));
            if (senv::open_unchecked(session_key, senv::SecureEnvelope::parse(resp.body)) != payload)
                throw std::runtime_error("relayed payload differs");
            return secs;
        };
        std::vector<double> pass_times, legacy_times;
        timed(pass_gw->endpoint(), pass_reqs[0]);  // warm-up
        timed(legacy_gw->endpoint(), legacy_reqs[0]);
        for (int i = 1; i <= kRequests; ++i) {
            pass_times.push_back(timed(pass_gw->endpoint(), pass_reqs[static_cast<std::size_t>(i)]));
            legacy_times.push_back(timed(legacy_gw->endpoint(), legacy_reqs[static_cast<std::size_t>(i)]));
        }
        pass_gw->stop();
        legacy_gw->stop();
        const double mib_per_request = 2.0 * static_cast<double>(payload.size()) / (1 << 20);
        passthrough = mib_per_request / median(pass_times);
        legacy = mib_per_request / median(legacy_times);
    } catch (const std::exception& e) {
        error = e.what();
    }
    origin.stop();
    const double relay_ratio = legacy > 0 ? passthrough / legacy : 0;
    const double secs = seconds_since(start);
    const bool pass = error.empty() && project_ratio <= kProjectRatioMax && relay_ratio >= kRelayRatioMin &&
                      secs < kBenchmarkSeconds;
    return {pass, fmt("parse+project/parse = %.2f (max %.1f) on %zu B; passthrough %.0f MiB/s vs legacy %.0f MiB/s, "
                      "ratio %.2f (min %.1f); %.1f s%s%s",
                      project_ratio, kProjectRatioMax, doc.size(), passthrough, legacy, relay_ratio, kRelayRatioMin,
                      secs, error.empty() ? "" : "; error: ", error.c_str())};
}

Verdict end_to_end() {
    testsupport::TempDir site, cache;
    testsupport::write_file(site / "hello.whtml", testsupport::kHelloDoc);
    testsupport::LiveStack stack(site.path(), cache.path(), {});
    const auto html = gateway::fetch(stack.gateway_endpoint(), gateway::parse_url("http://example.test/hello.whtml"));
    const auto wml = gateway::fetch(stack.gateway_endpoint(), gateway::parse_url("wap://example.test/hello.whtml"));
    const bool html_ok = html.status == 200 && testsupport::text_of(html.body) == testsupport::kHelloHtml;
    const bool wml_ok = wml.status == 200 && testsupport::text_of(wml.body) == testsupport::kHelloWml;
    return {html_ok && wml_ok, fmt("http %d %s, wap %d %s", html.status, html_ok ? "exact" : "MISMATCH", wml.status,
                                   wml_ok ? "exact" : "MISMATCH")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
        {"well-formedness oracle equivalence", oracle_equivalence},
        {"projection purity", projection_purity},
        {"security gap reproduction", security_gap},
        {"bytecode reuse", bytecode_reuse},
        {"codec bit-exactness", codecs},
        {"overhead", overhead},
        {"end-to-end fetch", end_to_end},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
