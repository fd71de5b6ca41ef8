#pragma once

#include "nextmethod/service.hpp"

#include <memory>
#include <string>

namespace nextmethod {

/// JSON-over-HTTP front end of a Service. See README for the endpoints.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and serves until stop(); returns false if binding fails.
    bool listen(const std::string& host, int port);
    /// Binds to a free port and returns it, or -1.
    int bind_any_port(const std::string& host);
    /// Serves on the socket bound by bind_any_port until stop().
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace nextmethod
