#pragma once

// JSON front end shared by the CLI and the HTTP service. Every command takes
// a payload document and returns a result document with stable key order;
// failures become {code, message, offending_field} documents.

#include <string>
#include <string_view>

#include <json.hpp>

namespace survpower::api {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitDomain = 3,
  kExitConvergence = 4,
};

struct Response {
  int exit_code = kExitOk;
  Json body;
};

/// Commands accepted by dispatch, in documentation order.
inline constexpr std::string_view kCommands[] = {"rct", "obs", "vif", "bounds", "curve",
                                                 "simulate"};

bool is_command(std::string_view command);

Response dispatch(std::string_view command, const Json& payload);

/// Parses `text` as JSON first; malformed input is a validation error.
Response dispatch_text(std::string_view command, std::string_view text);

/// Envelope form {"command": ..., "payload": {...}}.
Response dispatch_envelope(const Json& envelope);

Json error_document(std::string_view code, std::string_view message, const Json& field);

/// Compact or indented dump terminated by a newline. CLI and HTTP both
/// emit exactly this text.
std::string render(const Json& doc, bool pretty = false);

int http_status(int exit_code);

Json health_document();

}  // namespace survpower::api
