#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "miohint/typed_value.hpp"

namespace miohint {

enum class HttpVerb { Get, Post, Put, Delete };
enum class ParamKind { Path, Query, Header, Body };
enum class Provenance { RandomInit, RandomMutation, LlmMutation };

const char* to_string(HttpVerb v);
const char* to_string(ParamKind k);
const char* to_string(Provenance p);
std::optional<HttpVerb> parse_verb(const std::string& s);
std::optional<ParamKind> parse_param_kind(const std::string& s);

// One HTTP request. Path/query/header parameters are flat name->value maps;
// the body is a full value tree.
struct RestCallAction {
  HttpVerb verb = HttpVerb::Get;
  std::string path_template;  // e.g. "/users/{uid}/profile"
  std::map<std::string, TypedValue> path_params;
  std::map<std::string, TypedValue> query_params;
  std::map<std::string, TypedValue> headers;
  TypedValue body;  // Null when the action carries no body

  // Checks the structural invariants: every `{name}` in the template has a
  // matching path param, and header names are case-insensitively unique.
  void validate() const;

  std::string rendered_path() const;

  nlohmann::ordered_json to_json(int index = -1) const;
  static RestCallAction from_json(const nlohmann::json& j);
};

struct TestCase {
  std::vector<RestCallAction> actions;  // non-empty
  Provenance provenance = Provenance::RandomInit;

  void validate() const;
  nlohmann::ordered_json to_json() const;
};

// Address of one leaf field inside an action. For Body the path walks the
// value tree (array indices rendered as decimal strings); for the other kinds
// it is the single parameter name.
struct FieldRef {
  ParamKind kind = ParamKind::Body;
  std::vector<std::string> path;
};

std::vector<std::string> template_param_names(const std::string& path_template);

// All leaf fields of an action, in a stable order (path, query, header, body;
// map keys sorted, body tree walked depth-first).
std::vector<FieldRef> enumerate_leaf_fields(const RestCallAction& action);

// Throw NoSuchField (listing the names available at the failing level) when
// the path does not resolve.
const TypedValue& get_field(const RestCallAction& action, const FieldRef& ref);
void set_field(RestCallAction& action, const FieldRef& ref, TypedValue value);

}  // namespace miohint
