#pragma once

#include <string>

namespace httplib {
class Server;
}

namespace survpower::api {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

inline constexpr const char* kBindEnv = "SURVPOWER_BIND";

/// "host:port", ":port" or "port". Throws Error(kValidation) otherwise.
BindAddress parse_bind(const std::string& text);

/// POST /api/<command> and GET /api/health. When static_dir is non-empty its
/// files are served under "/".
void install_routes(httplib::Server& server, const std::string& static_dir = {});

}  // namespace survpower::api
