#include "whtmlgate/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>

namespace whtmlgate::net {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

struct AddrInfoDeleter {
    void operator()(addrinfo* p) const noexcept { freeaddrinfo(p); }
};
using AddrInfoPtr = std::unique_ptr<addrinfo, AddrInfoDeleter>;

AddrInfoPtr resolve(const Endpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    addrinfo* result = nullptr;
    const std::string port = std::to_string(ep.port);
    const int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &result);
    if (rc != 0) throw NetError(NetError::Kind::Address, "cannot resolve " + ep.str() + ": " + gai_strerror(rc));
    return AddrInfoPtr(result);
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos)
        throw NetError(NetError::Kind::Address, "address '" + std::string(text) + "' must be host:port");
    Endpoint ep;
    std::string_view host = text.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    ep.host = host.empty() ? "127.0.0.1" : std::string(host);
    const std::string_view port = text.substr(colon + 1);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (port.empty() || ec != std::errc{} || ptr != port.data() + port.size() || value > 65535)
        throw NetError(NetError::Kind::Address, "bad port in '" + std::string(text) + "'");
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Socket Socket::connect(const Endpoint& to, std::chrono::milliseconds timeout) {
    AddrInfoPtr info = resolve(to, false);
    std::string last_error = "no addresses";
    for (addrinfo* ai = info.get(); ai != nullptr; ai = ai->ai_next) {
        Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
        if (!s.valid()) {
            last_error = errno_text("socket");
            continue;
        }
        const int flags = fcntl(s.fd(), F_GETFL, 0);
        fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
        int rc = ::connect(s.fd(), ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno == EINPROGRESS) {
            pollfd p{s.fd(), POLLOUT, 0};
            rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
            if (rc == 0) {
                last_error = "connect timed out";
                continue;
            }
            int err = 0;
            socklen_t len = sizeof err;
            getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
            if (rc < 0 || err != 0) {
                last_error = std::string("connect: ") + std::strerror(err != 0 ? err : errno);
                continue;
            }
        } else if (rc != 0) {
            last_error = errno_text("connect");
            continue;
        }
        fcntl(s.fd(), F_SETFL, flags);
        int one = 1;
        setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        s.set_timeout(timeout);
        return s;
    }
    throw NetError(NetError::Kind::Connect, "cannot connect to " + to.str() + ": " + last_error);
}

void Socket::set_timeout(std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

std::size_t Socket::read_some(std::span<std::uint8_t> buffer) {
    for (;;) {
        const ssize_t n = ::recv(fd_, buffer.data(), buffer.size(), 0);
        if (n >= 0) return static_cast<std::size_t>(n);
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) throw NetError(NetError::Kind::Timeout, "read timed out");
        throw NetError(NetError::Kind::Io, errno_text("recv"));
    }
}

void Socket::write_all(std::span<const std::uint8_t> data) {
    while (!data.empty()) {
        const ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw NetError(NetError::Kind::Timeout, "write timed out");
            throw NetError(NetError::Kind::Io, errno_text("send"));
        }
        data = data.subspan(static_cast<std::size_t>(n));
    }
}

void Socket::shutdown_write() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

void Socket::close() noexcept {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Listener& Listener::operator=(Listener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Listener Listener::bind(const Endpoint& at) {
    AddrInfoPtr info = resolve(at, true);
    std::string last_error = "no addresses";
    for (addrinfo* ai = info.get(); ai != nullptr; ai = ai->ai_next) {
        Listener l;
        l.fd_ = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (l.fd_ < 0) {
            last_error = errno_text("socket");
            continue;
        }
        int one = 1;
        setsockopt(l.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(l.fd_, ai->ai_addr, ai->ai_addrlen) != 0) {
            last_error = errno_text("bind");
            continue;
        }
        if (::listen(l.fd_, 128) != 0) {
            last_error = errno_text("listen");
            continue;
        }
        return l;
    }
    throw NetError(NetError::Kind::Connect, "cannot listen on " + at.str() + ": " + last_error);
}

Endpoint Listener::local_endpoint() const {
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    if (getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        throw NetError(NetError::Kind::Io, errno_text("getsockname"));
    char host[INET6_ADDRSTRLEN] = {};
    Endpoint ep;
    if (addr.ss_family == AF_INET) {
        const auto* in = reinterpret_cast<const sockaddr_in*>(&addr);
        inet_ntop(AF_INET, &in->sin_addr, host, sizeof host);
        ep.port = ntohs(in->sin_port);
    } else {
        const auto* in6 = reinterpret_cast<const sockaddr_in6*>(&addr);
        inet_ntop(AF_INET6, &in6->sin6_addr, host, sizeof host);
        ep.port = ntohs(in6->sin6_port);
    }
    ep.host = host;
    return ep;
}

Socket Listener::accept() {
    for (;;) {
        const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
        if (fd >= 0) {
            int one = 1;
            setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (errno == EINTR || errno == ECONNABORTED) continue;
        return Socket();
    }
}

void Listener::shutdown() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Listener::close() noexcept {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

}  // namespace whtmlgate::net
