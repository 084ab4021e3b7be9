#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include "whtmlgate/net/http.hpp"

namespace whtmlgate::net {

using Handler = std::function<HttpResponse(const HttpRequest&)>;

/// Thread-per-connection HTTP server. Each connection carries one request.
/// Unparseable requests get a 400; a handler that throws yields a 500.
class Server {
public:
    Server(const Endpoint& listen, Handler handler, std::chrono::milliseconds timeout = kDefaultTimeout,
           Limits limits = {});
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Starts the accept loop on a background thread.
    void start();

    /// Runs the accept loop on the calling thread until stop().
    void run();

    /// Stops accepting and waits for in-flight connections to finish.
    void stop();

    Endpoint endpoint() const { return bound_; }
    std::uint16_t port() const noexcept { return bound_.port; }

private:
    void serve_connection(Socket socket);

    Listener listener_;
    Endpoint bound_;
    Handler handler_;
    std::chrono::milliseconds timeout_;
    Limits limits_;
    std::thread accept_thread_;
    std::atomic<bool> stopping_{false};
    std::mutex mu_;
    std::condition_variable idle_;
    std::size_t active_ = 0;
};

}  // namespace whtmlgate::net
