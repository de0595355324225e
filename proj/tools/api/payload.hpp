#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "api.hpp"

namespace survpower::api {

/// Typed, range-checked access to a payload object. Every key that is read
/// is marked; finish() rejects any key never read.
class Payload {
 public:
  Payload(const Json& doc, std::string prefix = {});

  bool has(const char* key) const;

  std::optional<double> number(const char* key);
  double number(const char* key, double fallback);
  double required_number(const char* key);

  std::optional<std::int64_t> integer(const char* key);
  std::optional<std::uint64_t> unsigned_integer(const char* key);
  std::optional<std::string> string(const char* key);
  std::optional<bool> boolean(const char* key);
  const Json* object(const char* key);
  const Json* array(const char* key);

  void finish() const;

  std::string path(const char* key) const { return prefix_ + key; }

 private:
  const Json* take(const char* key);

  const Json& doc_;
  std::string prefix_;
  std::set<std::string> seen_;
};

[[noreturn]] void invalid(const std::string& field, const std::string& message);

void require_open_unit(const std::string& field, double value);
void require_positive(const std::string& field, double value);

}  // namespace survpower::api
