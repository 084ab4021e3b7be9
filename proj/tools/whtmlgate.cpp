// whtmlgate: command-line front end for the markup core, the script
// compiler and VM, the image transcoder, the gateway, the origin and the
// fetching client.
//
// Exit status: 0 success, 1 input or validation failure, 2 usage error,
// 3 I/O or network failure.

#include <charconv>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "whtmlgate/gateway/client.hpp"
#include "whtmlgate/gateway/gateway.hpp"
#include "whtmlgate/gateway/origin.hpp"
#include "whtmlgate/media/media.hpp"
#include "whtmlgate/projector.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/wmls/compiler.hpp"
#include "whtmlgate/wmls/error.hpp"
#include "whtmlgate/wmls/vm.hpp"

namespace {

using namespace whtmlgate;

enum Exit : int { kOk = 0, kInput = 1, kUsage = 2, kIo = 3 };

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string read_text(const std::string& path) {
    const auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

// "-" or empty means standard output.
void write_output(const std::string& path, std::span<const std::uint8_t> bytes) {
    if (path.empty() || path == "-") {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("cannot write " + path);
}

void write_output(const std::string& path, std::string_view text) {
    write_output(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string diagnostic(const std::string& file, const whtml::Error& e) {
    return file + ":" + std::to_string(e.position().line) + ":" + std::to_string(e.position().column) + ": " +
           std::string(whtml::to_string(e.kind())) + ": " + e.what();
}

struct Globals {
    std::string registry;

    whtml::TagRegistry load() const {
        if (!registry.empty() && !std::ifstream(registry)) throw IoFailure("cannot read registry " + registry);
        return gateway::load_registry(registry.empty() ? std::nullopt
                                                       : std::optional<std::filesystem::path>(registry));
    }
};

int cmd_validate(const Globals& g, const std::string& file) {
    const auto registry = g.load();
    const std::string text = read_text(file);
    try {
        whtml::parse(text, registry);
    } catch (const whtml::Error& e) {
        std::cerr << diagnostic(file, e) << '\n';
        return kInput;
    }
    std::cout << "well-formed\n";
    return kOk;
}

int cmd_project(const Globals& g, const std::string& file, const std::string& profile, const std::string& out) {
    const auto registry = g.load();
    const std::string text = read_text(file);
    const auto target = profile == "wml" ? projector::Target::Wml : projector::Target::Html;
    try {
        const auto doc = whtml::parse(text, registry);
        write_output(out, projector::serialize(projector::project(doc, target)));
    } catch (const whtml::Error& e) {
        std::cerr << diagnostic(file, e) << '\n';
        return kInput;
    } catch (const projector::ProjectionError& e) {
        std::cerr << file << ": " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

int cmd_compile(const std::string& file, const std::string& out, bool disassemble) {
    const wmls::ScriptSource src{read_text(file)};
    try {
        const auto module = wmls::compile(src);
        if (disassemble) {
            write_output(out, wmls::disassemble(module));
        } else {
            write_output(out, wmls::encode_module(module));
        }
    } catch (const wmls::CompileError& e) {
        std::cerr << file << ":" << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

wmls::Value parse_arg(const std::string& text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (!text.empty() && ec == std::errc{} && ptr == text.data() + text.size()) return wmls::Value::integer(v);
    if (text == "true") return wmls::Value::boolean(true);
    if (text == "false") return wmls::Value::boolean(false);
    return wmls::Value::string(text);
}

int cmd_run(const std::string& file, const std::string& entry, const std::vector<std::string>& raw_args,
            std::uint64_t fuel) {
    const auto bytes = read_file(file);
    std::vector<wmls::Value> args;
    for (const auto& a : raw_args) args.push_back(parse_arg(a));
    try {
        const auto module = wmls::decode_module(bytes);
        std::cout << wmls::execute(module, entry, args, fuel).to_display() << '\n';
    } catch (const wmls::FormatError& e) {
        std::cerr << file << ": " << e.what() << '\n';
        return kInput;
    } catch (const wmls::VerifyError& e) {
        std::cerr << file << ": " << e.what() << '\n';
        return kInput;
    } catch (const wmls::RuntimeError& e) {
        std::cerr << file << ": " << wmls::to_string(e.kind()) << ": " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

int cmd_to_wbmp(const std::string& in, const std::string& out, unsigned threshold) {
    const auto bytes = read_file(in);
    try {
        write_output(out, media::encode_wbmp(media::bmp_to_bitmap(bytes, static_cast<std::uint8_t>(threshold))));
    } catch (const media::MediaError& e) {
        std::cerr << in << ": " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

int cmd_to_bmp(const std::string& in, const std::string& out) {
    const auto bytes = read_file(in);
    try {
        write_output(out, media::bitmap_to_bmp(media::decode_wbmp(bytes)));
    } catch (const media::MediaError& e) {
        std::cerr << in << ": " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

// Blocks SIGINT/SIGTERM on every thread, then waits for one of them.
template <class Server>
int serve_until_signal(Server& server, const std::string& port_file) {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    server.start();
    std::cerr << "listening on " << server.endpoint().str() << std::endl;
    if (!port_file.empty()) write_output(port_file, std::to_string(server.port()) + "\n");
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
    return kOk;
}

struct ServeOptions {
    std::string listen = "127.0.0.1:8080";
    std::string origin = "127.0.0.1:8081";
    std::string mode = "passthrough";
    std::string cache = "wbc-cache";
    std::string audit;
    std::string client_key;
    std::string server_key;
    std::string port_file;
};

int cmd_serve(const Globals& g, const ServeOptions& o) {
    gateway::GatewayConfig cfg;
    cfg.listen = net::Endpoint::parse(o.listen);
    cfg.origin = net::Endpoint::parse(o.origin);
    cfg.mode = gateway::parse_mode(o.mode);
    cfg.cache_dir = o.cache;
    if (!g.registry.empty()) cfg.registry_path = g.registry;
    if (!o.audit.empty()) cfg.audit_path = o.audit;
    if (!o.client_key.empty()) cfg.client_key = senv::parse_hex_key(o.client_key);
    if (!o.server_key.empty()) cfg.server_key = senv::parse_hex_key(o.server_key);
    if (cfg.mode == gateway::Mode::Legacy && (!cfg.client_key || !cfg.server_key)) {
        std::cerr << "legacy mode needs --client-key and --server-key\n";
        return kUsage;
    }
    gateway::GatewayServer server(std::move(cfg));
    return serve_until_signal(server, o.port_file);
}

int cmd_origin(const std::string& root, const std::string& listen, const std::string& key,
               const std::string& port_file) {
    if (!std::filesystem::is_directory(root)) throw IoFailure("not a directory: " + root);
    gateway::OriginConfig cfg{root, std::nullopt};
    if (!key.empty()) cfg.key = senv::parse_hex_key(key);
    gateway::OriginServer server(std::move(cfg), net::Endpoint::parse(listen));
    return serve_until_signal(server, port_file);
}

bool ends_with(std::string_view s, std::string_view suffix) { return s.size() >= suffix.size() && s.ends_with(suffix); }

int cmd_fetch(const Globals& g, const std::string& url_text, const std::string& out, const std::string& key_hex,
              const std::string& via) {
    gateway::Url url;
    try {
        url = gateway::parse_url(url_text);
    } catch (const gateway::UrlError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    }
    const net::Endpoint gw = via.empty() ? gateway::default_gateway() : net::Endpoint::parse(via);

    if (!gateway::is_secure(url.scheme)) {
        const auto r = gateway::fetch(gw, url);
        if (r.status < 200 || r.status > 299) {
            std::cerr << url.str() << ": " << r.status << ' ' << net::reason_phrase(r.status) << '\n';
            std::cerr.write(reinterpret_cast<const char*>(r.body.data()), static_cast<std::streamsize>(r.body.size()));
            return kInput;
        }
        write_output(out, r.body);
        return kOk;
    }

    if (key_hex.empty()) {
        std::cerr << "--key is required for " << gateway::to_string(url.scheme) << " URLs\n";
        return kUsage;
    }
    const auto key = senv::parse_hex_key(key_hex);
    gateway::SecureFetchResult r;
    try {
        r = gateway::secure_fetch(gw, url, key);
    } catch (const senv::EnvelopeError& e) {
        std::cerr << url.str() << ": " << senv::to_string(e.kind()) << ": " << e.what() << '\n';
        return kInput;
    }
    if (r.status != 200) {
        std::cerr << url.str() << ": " << r.status << ' ' << net::reason_phrase(r.status) << '\n';
        return kInput;
    }
    // The toy cipher has no integrity check, so a wrong key shows up as
    // garbage; markup is validated to catch that.
    if (ends_with(url.path, ".whtml")) {
        const auto registry = g.load();
        try {
            whtml::parse(std::string(r.plaintext.begin(), r.plaintext.end()), registry);
        } catch (const whtml::Error& e) {
            std::cerr << url.str() << ": response does not decrypt to valid wHTML (wrong key?): " << e.what() << '\n';
            return kInput;
        }
    }
    write_output(out, r.plaintext);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wHTML gateway toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--registry", g.registry, "Tag registry file (default: $WHTML_REGISTRY or built-in)");

    std::string file, out, profile = "html", entry = "main", listen, root, key, via, port_file;
    std::vector<std::string> run_args;
    bool disassemble = false;
    unsigned threshold = 128;
    std::uint64_t fuel = 1'000'000;
    ServeOptions serve;

    auto* validate = app.add_subcommand("validate", "Check that a wHTML file is well-formed");
    validate->add_option("file", file)->required();

    auto* project = app.add_subcommand("project", "Project a wHTML file to HTML or WML");
    project->add_option("file", file)->required();
    project->add_option("--profile", profile, "Target profile")->capture_default_str()->check(CLI::IsMember({"html", "wml"}));
    project->add_option("-o,--output", out, "Output file (default: stdout)");

    auto* compile = app.add_subcommand("compile", "Compile a WMLScript file to .wbc");
    compile->add_option("file", file)->required();
    compile->add_option("-o,--output", out, "Output .wbc file (default: input with .wbc)");
    compile->add_flag("--disassemble", disassemble, "Print a listing instead of bytecode");

    auto* run = app.add_subcommand("run", "Run a function from a .wbc file");
    run->add_option("file", file)->required();
    run->add_option("args", run_args, "Arguments (integers, true/false, otherwise strings)");
    run->add_option("--entry", entry, "Function to call")->capture_default_str();
    run->add_option("--fuel", fuel, "Instruction budget")->capture_default_str();

    auto* to_wbmp = app.add_subcommand("to-wbmp", "Convert a 24-bit BMP to WBMP");
    to_wbmp->add_option("file", file)->required();
    to_wbmp->add_option("-o,--output", out)->required();
    to_wbmp->add_option("--threshold", threshold, "Luma at or above which a pixel is white")->capture_default_str()->check(CLI::Range(0u, 255u));

    auto* to_bmp = app.add_subcommand("to-bmp", "Convert a WBMP to a 24-bit BMP");
    to_bmp->add_option("file", file)->required();
    to_bmp->add_option("-o,--output", out)->required();

    auto* serve_cmd = app.add_subcommand("serve", "Run the gateway");
    serve_cmd->add_option("--listen", serve.listen, "Address to listen on")->capture_default_str();
    serve_cmd->add_option("--origin", serve.origin, "Origin server address")->capture_default_str();
    serve_cmd->add_option("--mode", serve.mode, "Handling of https/waps")->capture_default_str()->check(CLI::IsMember({"passthrough", "legacy"}));
    serve_cmd->add_option("--cache", serve.cache, "Bytecode cache directory")->capture_default_str();
    serve_cmd->add_option("--audit", serve.audit, "Append audit records to this file");
    serve_cmd->add_option("--client-key", serve.client_key, "Legacy mode: client-side key (hex)");
    serve_cmd->add_option("--server-key", serve.server_key, "Legacy mode: server-side key (hex)");
    serve_cmd->add_option("--port-file", serve.port_file, "Write the bound port here once listening");

    auto* origin = app.add_subcommand("origin", "Run the static origin server");
    origin->add_option("--root", root, "Directory to serve")->required();
    origin->add_option("--listen", listen, "Address to listen on")->default_val("127.0.0.1:8081");
    origin->add_option("--key", key, "Answer enveloped requests with this key (hex)");
    origin->add_option("--port-file", port_file, "Write the bound port here once listening");

    auto* fetch = app.add_subcommand("fetch", "Fetch a URL through the gateway");
    fetch->add_option("url", file)->required();
    fetch->add_option("-o,--output", out, "Output file (default: stdout)");
    fetch->add_option("--key", key, "Pre-shared key for https/waps (hex)");
    fetch->add_option("--via", via, "Gateway address (default: $WHTML_GATEWAY or 127.0.0.1:8080)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) return cmd_validate(g, file);
        if (*project) return cmd_project(g, file, profile, out);
        if (*compile) return cmd_compile(file, out, disassemble);
        if (*run) return cmd_run(file, entry, run_args, fuel);
        if (*to_wbmp) return cmd_to_wbmp(file, out, threshold);
        if (*to_bmp) return cmd_to_bmp(file, out);
        if (*serve_cmd) return cmd_serve(g, serve);
        if (*origin) return cmd_origin(root, listen, key, port_file);
        if (*fetch) return cmd_fetch(g, file, out, key, via);
    } catch (const IoFailure& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    } catch (const net::NetError& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    } catch (const net::ProtocolError& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    } catch (const senv::EnvelopeError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const whtml::Error& e) {
        std::cerr << "registry: " << e.what() << '\n';
        return kInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
