#include "fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace testsupport {

TempDir::TempDir() {
    std::string templ = (std::filesystem::temp_directory_path() / "whtmlgate-test-XXXXXX").string();
    if (::mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = templ;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& p, std::string_view contents) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

void write_file(const std::filesystem::path& p, const std::vector<std::uint8_t>& contents) {
    write_file(p, std::string_view(reinterpret_cast<const char*>(contents.data()), contents.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::uint8_t> bytes_of(std::string_view s) { return std::vector<std::uint8_t>(s.begin(), s.end()); }

std::string text_of(const std::vector<std::uint8_t>& b) { return std::string(b.begin(), b.end()); }

LiveStack::LiveStack(const std::filesystem::path& root, const std::filesystem::path& cache_dir, Options options) {
    using namespace whtmlgate;
    origin_ = std::make_unique<gateway::OriginServer>(gateway::OriginConfig{root, options.origin_key},
                                                      net::Endpoint{"127.0.0.1", 0});
    origin_->start();
    gateway::GatewayConfig cfg;
    cfg.listen = net::Endpoint{"127.0.0.1", 0};
    cfg.origin = origin_->endpoint();
    cfg.mode = options.mode;
    cfg.cache_dir = cache_dir;
    cfg.client_key = options.client_key;
    cfg.server_key = options.server_key;
    gateway_ = std::make_unique<gateway::GatewayServer>(std::move(cfg));
    gateway_->start();
}

LiveStack::~LiveStack() {
    gateway_->stop();
    origin_->stop();
}

}  // namespace testsupport
