#pragma once

// HTTP transport for Api, built on cpp-httplib.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <httplib.h>

#include "ndp/cli.hpp"
#include "ndp/session.hpp"

namespace ndp {

inline void mount(httplib::Server& server, Api& api) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r = api.handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(R"(/sessions/.*)", forward);
  server.Post(R"(/sessions(/.*)?)", forward);
}

namespace detail {
inline std::atomic<httplib::Server*> running_server{nullptr};

// httplib's defaults add SO_REUSEPORT, which lets a second server share a busy port.
inline void exclusive_port(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
}

inline void stop_on_signal(int) {
  if (auto* s = running_server.load()) s->stop();
}
}  // namespace detail

// Serves until interrupted. Sessions live in memory only.
inline int cmd_serve(int port, const std::optional<std::filesystem::path>& static_dir, std::ostream& out,
                     std::ostream& err, const std::string& host = "127.0.0.1") {
  Api api;
  httplib::Server server;
  server.set_socket_options(detail::exclusive_port);
  mount(server, api);
  if (static_dir && !server.set_mount_point("/", static_dir->string())) {
    err << "IoError: no such directory " << static_dir->string() << "\n";
    return kExitUsage;
  }
  if (!server.bind_to_port(host, port)) {
    err << "IoError: cannot listen on " << host << ":" << port << "\n";
    return kExitUsage;
  }
  detail::running_server = &server;
  auto previous_int = std::signal(SIGINT, detail::stop_on_signal);
  auto previous_term = std::signal(SIGTERM, detail::stop_on_signal);
  out << "listening on http://" << host << ":" << port << "\n" << std::flush;
  server.listen_after_bind();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  detail::running_server = nullptr;
  out << "stopped\n";
  return kExitOk;
}

}  // namespace ndp
