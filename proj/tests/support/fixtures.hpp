#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whtmlgate/gateway/gateway.hpp"
#include "whtmlgate/gateway/origin.hpp"

namespace testsupport {

inline constexpr std::string_view kHelloDoc =
    R"(<whtml><hbody><p>Hello</p></hbody><wcard id="home"><p>Hello</p></wcard></whtml>)";
inline constexpr std::string_view kHelloHtml = "<html><body><p>Hello</p></body></html>";
inline constexpr std::string_view kHelloWml = R"(<wml><card id="home"><p>Hello</p></card></wml>)";

/// A fresh directory, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& p, std::string_view contents);
void write_file(const std::filesystem::path& p, const std::vector<std::uint8_t>& contents);
std::vector<std::uint8_t> read_file(const std::filesystem::path& p);
std::vector<std::uint8_t> bytes_of(std::string_view s);
std::string text_of(const std::vector<std::uint8_t>& b);

/// An origin and a gateway on ephemeral loopback ports.
class LiveStack {
public:
    struct Options {
        whtmlgate::gateway::Mode mode = whtmlgate::gateway::Mode::Passthrough;
        std::optional<std::vector<std::uint8_t>> origin_key;
        std::optional<std::vector<std::uint8_t>> client_key;
        std::optional<std::vector<std::uint8_t>> server_key;
    };

    LiveStack(const std::filesystem::path& root, const std::filesystem::path& cache_dir, Options options);
    ~LiveStack();

    whtmlgate::gateway::Gateway& gateway() { return gateway_->gateway(); }
    whtmlgate::net::Endpoint gateway_endpoint() const { return gateway_->endpoint(); }
    whtmlgate::net::Endpoint origin_endpoint() const { return origin_->endpoint(); }

private:
    std::unique_ptr<whtmlgate::gateway::OriginServer> origin_;
    std::unique_ptr<whtmlgate::gateway::GatewayServer> gateway_;
};

}  // namespace testsupport
