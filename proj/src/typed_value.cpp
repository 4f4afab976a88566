#include "miohint/typed_value.hpp"

#include <cmath>
#include <limits>

#include "miohint/errors.hpp"

namespace miohint {

const char* to_string(ValueTag tag) {
  switch (tag) {
    case ValueTag::Str: return "str";
    case ValueTag::Int: return "int";
    case ValueTag::Float: return "float";
    case ValueTag::Bool: return "bool";
    case ValueTag::Null: return "null";
    case ValueTag::Object: return "object";
    case ValueTag::Array: return "array";
  }
  return "?";
}

TypedValue::TypedValue(double d) : v_(d) {
  if (!std::isfinite(d)) throw Error("TypedValue: float must be finite");
}

ValueTag TypedValue::tag() const {
  switch (v_.index()) {
    case 0: return ValueTag::Null;
    case 1: return ValueTag::Str;
    case 2: return ValueTag::Int;
    case 3: return ValueTag::Float;
    case 4: return ValueTag::Bool;
    case 5: return ValueTag::Object;
    default: return ValueTag::Array;
  }
}

bool TypedValue::is_scalar() const {
  ValueTag t = tag();
  return t != ValueTag::Object && t != ValueTag::Array;
}

const std::string& TypedValue::as_str() const {
  if (tag() != ValueTag::Str) throw Error("TypedValue: not a string");
  return std::get<std::string>(v_);
}

std::int64_t TypedValue::as_int() const {
  if (tag() != ValueTag::Int) throw Error("TypedValue: not an int");
  return std::get<std::int64_t>(v_);
}

double TypedValue::as_float() const {
  if (tag() == ValueTag::Int) return static_cast<double>(std::get<std::int64_t>(v_));
  if (tag() != ValueTag::Float) throw Error("TypedValue: not a float");
  return std::get<double>(v_);
}

bool TypedValue::as_bool() const {
  if (tag() != ValueTag::Bool) throw Error("TypedValue: not a bool");
  return std::get<bool>(v_);
}

const TypedValue::Object& TypedValue::as_object() const {
  if (tag() != ValueTag::Object) throw Error("TypedValue: not an object");
  return std::get<Object>(v_);
}

TypedValue::Object& TypedValue::as_object() {
  if (tag() != ValueTag::Object) throw Error("TypedValue: not an object");
  return std::get<Object>(v_);
}

const TypedValue::Array& TypedValue::as_array() const {
  if (tag() != ValueTag::Array) throw Error("TypedValue: not an array");
  return std::get<Array>(v_);
}

TypedValue::Array& TypedValue::as_array() {
  if (tag() != ValueTag::Array) throw Error("TypedValue: not an array");
  return std::get<Array>(v_);
}

nlohmann::json TypedValue::to_json() const {
  switch (tag()) {
    case ValueTag::Null: return nullptr;
    case ValueTag::Str: return std::get<std::string>(v_);
    case ValueTag::Int: return std::get<std::int64_t>(v_);
    case ValueTag::Float: return std::get<double>(v_);
    case ValueTag::Bool: return std::get<bool>(v_);
    case ValueTag::Object: {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [k, v] : std::get<Object>(v_)) j[k] = v.to_json();
      return j;
    }
    case ValueTag::Array: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& v : std::get<Array>(v_)) j.push_back(v.to_json());
      return j;
    }
  }
  return nullptr;
}

TypedValue TypedValue::from_json(const nlohmann::json& j) {
  if (j.is_null()) return TypedValue(nullptr);
  if (j.is_string()) return TypedValue(j.get<std::string>());
  if (j.is_boolean()) return TypedValue(j.get<bool>());
  if (j.is_number_integer()) return TypedValue(j.get<std::int64_t>());
  if (j.is_number_unsigned()) {
    auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw Error("TypedValue: integer out of signed 64-bit range");
    return TypedValue(static_cast<std::int64_t>(u));
  }
  if (j.is_number_float()) return TypedValue(j.get<double>());
  if (j.is_object()) {
    Object o;
    for (auto it = j.begin(); it != j.end(); ++it) o.emplace(it.key(), from_json(it.value()));
    return TypedValue(std::move(o));
  }
  if (j.is_array()) {
    Array a;
    for (const auto& e : j) a.push_back(from_json(e));
    return TypedValue(std::move(a));
  }
  throw Error("TypedValue: unsupported json value");
}

std::string TypedValue::to_wire_string() const {
  switch (tag()) {
    case ValueTag::Str: return std::get<std::string>(v_);
    case ValueTag::Null: return "";
    default: return to_json().dump();
  }
}

}  // namespace miohint
