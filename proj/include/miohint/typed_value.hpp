#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace miohint {

enum class ValueTag { Str, Int, Float, Bool, Null, Object, Array };

const char* to_string(ValueTag tag);

// JSON-shaped value used for request parameters and bodies. Ints are signed
// 64-bit, floats must be finite; both are enforced at construction.
class TypedValue {
 public:
  using Object = std::map<std::string, TypedValue>;
  using Array = std::vector<TypedValue>;

  TypedValue() : v_(nullptr) {}
  TypedValue(std::nullptr_t) : v_(nullptr) {}
  TypedValue(std::string s) : v_(std::move(s)) {}
  TypedValue(const char* s) : v_(std::string(s)) {}
  TypedValue(std::int64_t i) : v_(i) {}
  TypedValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  TypedValue(double d);
  TypedValue(bool b) : v_(b) {}
  TypedValue(Object o) : v_(std::move(o)) {}
  TypedValue(Array a) : v_(std::move(a)) {}

  ValueTag tag() const;
  bool is_scalar() const;

  const std::string& as_str() const;
  std::int64_t as_int() const;
  double as_float() const;
  bool as_bool() const;
  const Object& as_object() const;
  Object& as_object();
  const Array& as_array() const;
  Array& as_array();

  bool operator==(const TypedValue& other) const { return v_ == other.v_; }
  bool operator!=(const TypedValue& other) const { return !(*this == other); }

  nlohmann::json to_json() const;
  static TypedValue from_json(const nlohmann::json& j);

  // Rendering used for query/path/header wire values and prompt text.
  std::string to_wire_string() const;

 private:
  std::variant<std::nullptr_t, std::string, std::int64_t, double, bool, Object, Array> v_;
};

}  // namespace miohint
