#include "http.hpp"

#include <charconv>

#include <httplib.h>

#include "api.hpp"
#include "survpower/error.hpp"

namespace survpower::api {

BindAddress parse_bind(const std::string& text) {
  BindAddress out;
  std::string port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) out.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  int port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 ||
      port > 65535) {
    throw Error(ErrorCode::kValidation, "bind address must look like host:port", "bind");
  }
  out.port = port;
  return out;
}

void install_routes(httplib::Server& server, const std::string& static_dir) {
  constexpr const char* kJson = "application/json";
  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(render(health_document()), kJson);
  });
  server.Post(R"(/api/([a-z]+))", [](const httplib::Request& req, httplib::Response& res) {
    const std::string command = req.matches[1];
    Response out;
    if (!is_command(command)) {
      out = {kExitValidation,
             error_document("validation", "unknown command '" + command + "'", "command")};
      res.status = 404;
    } else {
      out = dispatch_text(command, req.body);
      res.status = http_status(out.exit_code);
    }
    res.set_content(render(out.body), kJson);
  });
  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

}  // namespace survpower::api
