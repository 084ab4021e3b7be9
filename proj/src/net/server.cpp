#include "whtmlgate/net/server.hpp"

namespace whtmlgate::net {

Server::Server(const Endpoint& listen, Handler handler, std::chrono::milliseconds timeout, Limits limits)
    : listener_(Listener::bind(listen)), handler_(std::move(handler)), timeout_(timeout), limits_(limits) {
    bound_ = listener_.local_endpoint();
}

Server::~Server() { stop(); }

void Server::start() {
    accept_thread_ = std::thread([this] { run(); });
}

void Server::run() {
    while (!stopping_.load()) {
        Socket s = listener_.accept();
        if (!s.valid()) break;
        if (stopping_.load()) break;
        {
            std::lock_guard lock(mu_);
            ++active_;
        }
        std::thread([this, s = std::move(s)]() mutable {
            serve_connection(std::move(s));
            std::lock_guard lock(mu_);
            if (--active_ == 0) idle_.notify_all();
        }).detach();
    }
}

void Server::stop() {
    if (stopping_.exchange(true)) {
        if (accept_thread_.joinable()) accept_thread_.join();
        return;
    }
    listener_.shutdown();
    if (accept_thread_.joinable()) accept_thread_.join();
    std::unique_lock lock(mu_);
    idle_.wait(lock, [this] { return active_ == 0; });
    listener_.close();
}

void Server::serve_connection(Socket socket) {
    socket.set_timeout(timeout_);
    HttpResponse response;
    try {
        HttpRequest request = read_request(socket, limits_);
        try {
            response = handler_(request);
        } catch (const std::exception& e) {
            response = HttpResponse::text(500, e.what());
        }
    } catch (const ProtocolError& e) {
        response = HttpResponse::text(400, e.what());
    } catch (const NetError&) {
        return;  // timeout or reset: just close
    }
    try {
        socket.write_all(response.serialize_head());
        socket.write_all(response.body);
        socket.shutdown_write();
    } catch (const NetError&) {
    }
}

}  // namespace whtmlgate::net
