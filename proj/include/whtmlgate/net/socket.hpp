#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace whtmlgate::net {

class NetError : public std::runtime_error {
public:
    enum class Kind { Connect, Timeout, Io, Address };

    NetError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;

    /// "host:port" or ":port". Throws NetError(Address).
    static Endpoint parse(std::string_view text);
    std::string str() const { return host + ":" + std::to_string(port); }
};

inline constexpr std::chrono::milliseconds kDefaultTimeout{5000};

/// Owning wrapper around a connected TCP socket.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) noexcept : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { close(); }

    static Socket connect(const Endpoint& to, std::chrono::milliseconds timeout = kDefaultTimeout);

    bool valid() const noexcept { return fd_ >= 0; }
    int fd() const noexcept { return fd_; }

    /// Applies the same timeout to reads and writes.
    void set_timeout(std::chrono::milliseconds timeout);

    /// Returns 0 at end of stream. Throws NetError(Timeout) or NetError(Io).
    std::size_t read_some(std::span<std::uint8_t> buffer);
    void write_all(std::span<const std::uint8_t> data);
    void shutdown_write() noexcept;
    void close() noexcept;

private:
    int fd_ = -1;
};

class Listener {
public:
    Listener() = default;
    Listener(Listener&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Listener& operator=(Listener&& other) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;
    ~Listener() { close(); }

    /// Binds and listens; port 0 picks an ephemeral port.
    static Listener bind(const Endpoint& at);

    Endpoint local_endpoint() const;

    /// Blocks until a client connects. Returns an invalid Socket once the
    /// listener has been shut down.
    Socket accept();

    /// Wakes a blocked accept() and stops listening.
    void shutdown() noexcept;
    void close() noexcept;

private:
    int fd_ = -1;
};

}  // namespace whtmlgate::net
