#include "miohint/rest.hpp"

#include <algorithm>
#include <cctype>

#include "miohint/errors.hpp"

namespace miohint {

const char* to_string(HttpVerb v) {
  switch (v) {
    case HttpVerb::Get: return "GET";
    case HttpVerb::Post: return "POST";
    case HttpVerb::Put: return "PUT";
    case HttpVerb::Delete: return "DELETE";
  }
  return "?";
}

const char* to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Path: return "path";
    case ParamKind::Query: return "query";
    case ParamKind::Header: return "header";
    case ParamKind::Body: return "body";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::RandomInit: return "RandomInit";
    case Provenance::RandomMutation: return "RandomMutation";
    case Provenance::LlmMutation: return "LlmMutation";
  }
  return "?";
}

std::optional<HttpVerb> parse_verb(const std::string& s) {
  if (s == "GET") return HttpVerb::Get;
  if (s == "POST") return HttpVerb::Post;
  if (s == "PUT") return HttpVerb::Put;
  if (s == "DELETE") return HttpVerb::Delete;
  return std::nullopt;
}

std::optional<ParamKind> parse_param_kind(const std::string& s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "path") return ParamKind::Path;
  if (lower == "query") return ParamKind::Query;
  if (lower == "header" || lower == "headers") return ParamKind::Header;
  if (lower == "body") return ParamKind::Body;
  return std::nullopt;
}

std::vector<std::string> template_param_names(const std::string& path_template) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = path_template.find('{', pos)) != std::string::npos) {
    std::size_t end = path_template.find('}', pos);
    if (end == std::string::npos) break;
    names.push_back(path_template.substr(pos + 1, end - pos - 1));
    pos = end + 1;
  }
  return names;
}

namespace {

std::string lower(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

void RestCallAction::validate() const {
  for (const auto& name : template_param_names(path_template)) {
    if (!path_params.count(name))
      throw Error("action on " + path_template + ": missing path param '" + name + "'");
  }
  std::vector<std::string> seen;
  for (const auto& [name, _] : headers) {
    std::string l = lower(name);
    if (std::find(seen.begin(), seen.end(), l) != seen.end())
      throw Error("action on " + path_template + ": duplicate header '" + name + "'");
    seen.push_back(l);
  }
}

std::string RestCallAction::rendered_path() const {
  std::string out = path_template;
  for (const auto& [name, value] : path_params) {
    std::string needle = "{" + name + "}";
    std::size_t pos = out.find(needle);
    if (pos != std::string::npos) out.replace(pos, needle.size(), value.to_wire_string());
  }
  return out;
}

nlohmann::ordered_json RestCallAction::to_json(int index) const {
  nlohmann::ordered_json j;
  if (index >= 0) j["index"] = index;
  j["verb"] = to_string(verb);
  j["path_template"] = path_template;
  auto dump_map = [](const std::map<std::string, TypedValue>& m) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m) o[k] = v.to_json();
    return o;
  };
  j["path"] = dump_map(path_params);
  j["query"] = dump_map(query_params);
  j["header"] = dump_map(headers);
  j["body"] = body.to_json();
  return j;
}

RestCallAction RestCallAction::from_json(const nlohmann::json& j) {
  RestCallAction a;
  auto verb = parse_verb(j.at("verb").get<std::string>());
  if (!verb) throw Error("bad verb in action json");
  a.verb = *verb;
  // Two accepted spellings: the serialized form ("path_template" plus a
  // "path" object of params) and the manifest shorthand ("path" string plus
  // optional "path_params").
  if (j.contains("path_template")) a.path_template = j["path_template"].get<std::string>();
  else a.path_template = j.at("path").get<std::string>();
  auto load_map = [](const nlohmann::json& o, std::map<std::string, TypedValue>& m) {
    if (o.is_null()) return;
    for (auto it = o.begin(); it != o.end(); ++it) m.emplace(it.key(), TypedValue::from_json(it.value()));
  };
  if (j.contains("path") && j["path"].is_object()) load_map(j["path"], a.path_params);
  if (j.contains("path_params")) load_map(j["path_params"], a.path_params);
  if (j.contains("query")) load_map(j["query"], a.query_params);
  if (j.contains("header")) load_map(j["header"], a.headers);
  if (j.contains("body")) a.body = TypedValue::from_json(j["body"]);
  return a;
}

void TestCase::validate() const {
  if (actions.empty()) throw Error("test case has no actions");
  for (const auto& a : actions) a.validate();
}

nlohmann::ordered_json TestCase::to_json() const {
  nlohmann::ordered_json j;
  j["provenance"] = to_string(provenance);
  j["actions"] = nlohmann::ordered_json::array();
  int i = 0;
  for (const auto& a : actions) j["actions"].push_back(a.to_json(i++));
  return j;
}

namespace {

void collect_body_leaves(const TypedValue& v, std::vector<std::string>& prefix,
                         std::vector<FieldRef>& out) {
  switch (v.tag()) {
    case ValueTag::Object:
      for (const auto& [k, child] : v.as_object()) {
        prefix.push_back(k);
        collect_body_leaves(child, prefix, out);
        prefix.pop_back();
      }
      break;
    case ValueTag::Array: {
      const auto& arr = v.as_array();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        prefix.push_back(std::to_string(i));
        collect_body_leaves(arr[i], prefix, out);
        prefix.pop_back();
      }
      break;
    }
    default:
      out.push_back(FieldRef{ParamKind::Body, prefix});
  }
}

std::vector<std::string> map_keys(const std::map<std::string, TypedValue>& m) {
  std::vector<std::string> keys;
  for (const auto& [k, _] : m) keys.push_back(k);
  return keys;
}

const TypedValue* walk_body(const TypedValue& body, const std::vector<std::string>& path,
                            std::string* fail_msg, std::vector<std::string>* available) {
  const TypedValue* cur = &body;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::string& seg = path[i];
    if (cur->tag() == ValueTag::Object) {
      const auto& obj = cur->as_object();
      auto it = obj.find(seg);
      if (it == obj.end()) {
        if (fail_msg) *fail_msg = "no body field '" + seg + "'";
        if (available) *available = map_keys(obj);
        return nullptr;
      }
      cur = &it->second;
    } else if (cur->tag() == ValueTag::Array) {
      const auto& arr = cur->as_array();
      std::size_t idx = 0;
      try {
        idx = static_cast<std::size_t>(std::stoul(seg));
      } catch (const std::exception&) {
        if (fail_msg) *fail_msg = "body segment '" + seg + "' is not an array index";
        if (available) for (std::size_t k = 0; k < arr.size(); ++k) available->push_back(std::to_string(k));
        return nullptr;
      }
      if (idx >= arr.size()) {
        if (fail_msg) *fail_msg = "body index " + seg + " out of range";
        if (available) for (std::size_t k = 0; k < arr.size(); ++k) available->push_back(std::to_string(k));
        return nullptr;
      }
      cur = &arr[idx];
    } else {
      if (fail_msg) *fail_msg = "body path descends into scalar at '" + seg + "'";
      return nullptr;
    }
  }
  return cur;
}

}  // namespace

std::vector<FieldRef> enumerate_leaf_fields(const RestCallAction& action) {
  std::vector<FieldRef> out;
  for (const auto& [k, _] : action.path_params) out.push_back({ParamKind::Path, {k}});
  for (const auto& [k, _] : action.query_params) out.push_back({ParamKind::Query, {k}});
  for (const auto& [k, _] : action.headers) out.push_back({ParamKind::Header, {k}});
  if (action.body.tag() != ValueTag::Null) {
    std::vector<std::string> prefix;
    collect_body_leaves(action.body, prefix, out);
  }
  return out;
}

const TypedValue& get_field(const RestCallAction& action, const FieldRef& ref) {
  if (ref.path.empty()) throw NoSuchField("empty field path", {});
  if (ref.kind == ParamKind::Body) {
    std::string msg;
    std::vector<std::string> available;
    const TypedValue* v = walk_body(action.body, ref.path, &msg, &available);
    if (!v) throw NoSuchField(msg, available);
    return *v;
  }
  const std::map<std::string, TypedValue>* m = nullptr;
  switch (ref.kind) {
    case ParamKind::Path: m = &action.path_params; break;
    case ParamKind::Query: m = &action.query_params; break;
    case ParamKind::Header: m = &action.headers; break;
    default: break;
  }
  auto it = m->find(ref.path.front());
  if (it == m->end())
    throw NoSuchField("no " + std::string(to_string(ref.kind)) + " param '" + ref.path.front() + "'",
                      map_keys(*m));
  return it->second;
}

void set_field(RestCallAction& action, const FieldRef& ref, TypedValue value) {
  if (ref.path.empty()) throw NoSuchField("empty field path", {});
  if (ref.kind == ParamKind::Body) {
    // Re-walk mutably: resolve the parent then assign the final segment.
    get_field(action, ref);  // throws with available-field info on miss
    TypedValue* cur = &action.body;
    for (std::size_t i = 0; i + 1 < ref.path.size(); ++i) {
      if (cur->tag() == ValueTag::Object) cur = &cur->as_object().at(ref.path[i]);
      else cur = &cur->as_array().at(std::stoul(ref.path[i]));
    }
    const std::string& last = ref.path.back();
    if (cur->tag() == ValueTag::Object) cur->as_object().at(last) = std::move(value);
    else if (cur->tag() == ValueTag::Array) cur->as_array().at(std::stoul(last)) = std::move(value);
    else *cur = std::move(value);
    return;
  }
  std::map<std::string, TypedValue>* m = nullptr;
  switch (ref.kind) {
    case ParamKind::Path: m = &action.path_params; break;
    case ParamKind::Query: m = &action.query_params; break;
    case ParamKind::Header: m = &action.headers; break;
    default: break;
  }
  auto it = m->find(ref.path.front());
  if (it == m->end())
    throw NoSuchField("no " + std::string(to_string(ref.kind)) + " param '" + ref.path.front() + "'",
                      map_keys(*m));
  it->second = std::move(value);
}

}  // namespace miohint
