#include "payload.hpp"

#include <cmath>
#include <limits>

#include "survpower/error.hpp"

namespace survpower::api {

void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::kValidation, message, field);
}

void require_open_unit(const std::string& field, double value) {
  if (!(value > 0.0 && value < 1.0)) invalid(field, field + " must lie in (0, 1)");
}

void require_positive(const std::string& field, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) invalid(field, field + " must be positive");
}

Payload::Payload(const Json& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {
  if (!doc_.is_object()) {
    invalid(prefix_.empty() ? "payload" : prefix_.substr(0, prefix_.size() - 1),
            "expected a JSON object");
  }
}

bool Payload::has(const char* key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }

const Json* Payload::take(const char* key) {
  seen_.insert(key);
  auto it = doc_.find(key);
  if (it == doc_.end() || it->is_null()) return nullptr;
  return &*it;
}

std::optional<double> Payload::number(const char* key) {
  const Json* v = take(key);
  if (!v) return std::nullopt;
  if (!v->is_number()) invalid(path(key), path(key) + " must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) invalid(path(key), path(key) + " must be finite");
  return x;
}

double Payload::number(const char* key, double fallback) { return number(key).value_or(fallback); }

double Payload::required_number(const char* key) {
  auto v = number(key);
  if (!v) invalid(path(key), path(key) + " is required");
  return *v;
}

std::optional<std::int64_t> Payload::integer(const char* key) {
  const Json* v = take(key);
  if (!v) return std::nullopt;
  if (v->is_number_integer()) return v->get<std::int64_t>();
  if (v->is_number_float()) {
    const double x = v->get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15)
      return static_cast<std::int64_t>(x);
  }
  invalid(path(key), path(key) + " must be an integer");
}

std::optional<std::uint64_t> Payload::unsigned_integer(const char* key) {
  const Json* v = take(key);
  if (!v) return std::nullopt;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  if (v->is_number_float()) {
    const double x = v->get<double>();
    if (x >= 0.0 && x == std::floor(x) && x < 9.0e15) return static_cast<std::uint64_t>(x);
  }
  invalid(path(key), path(key) + " must be a non-negative integer");
}

std::optional<std::string> Payload::string(const char* key) {
  const Json* v = take(key);
  if (!v) return std::nullopt;
  if (!v->is_string()) invalid(path(key), path(key) + " must be a string");
  return v->get<std::string>();
}

std::optional<bool> Payload::boolean(const char* key) {
  const Json* v = take(key);
  if (!v) return std::nullopt;
  if (!v->is_boolean()) invalid(path(key), path(key) + " must be true or false");
  return v->get<bool>();
}

const Json* Payload::object(const char* key) {
  const Json* v = take(key);
  if (v && !v->is_object()) invalid(path(key), path(key) + " must be an object");
  return v;
}

const Json* Payload::array(const char* key) {
  const Json* v = take(key);
  if (v && !v->is_array()) invalid(path(key), path(key) + " must be an array");
  return v;
}

void Payload::finish() const {
  for (const auto& [key, value] : doc_.items()) {
    if (!seen_.count(key)) invalid(prefix_ + key, "unknown field '" + prefix_ + key + "'");
  }
}

}  // namespace survpower::api
