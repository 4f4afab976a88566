#include "miohint/hint.hpp"

#include <cctype>

#include "miohint/errors.hpp"

namespace miohint {

namespace {

// Returns the index one past the matching close brace, or npos. Tracks
// string literals so embedded braces do not unbalance the scan.
std::size_t find_object_end(const std::string& text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

std::vector<std::string> split_dotted(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = s.find('.', start);
    if (dot == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, dot - start));
    start = dot + 1;
  }
  return out;
}

MutationHint hint_from_object(const nlohmann::json& j) {
  for (const char* key : {"action", "parameterType", "field", "newValue"}) {
    if (!j.contains(key)) throw HintParseError(std::string("hint missing key '") + key + "'");
  }

  MutationHint h;
  const auto& action = j["action"];
  if (action.is_number_integer() || action.is_number_unsigned()) {
    h.action_index = action.get<int>();
  } else if (action.is_string()) {
    const std::string s = action.get<std::string>();
    try {
      std::size_t pos = 0;
      h.action_index = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw HintParseError("hint action is not an index: '" + s + "'");
    }
  } else {
    throw HintParseError("hint action has wrong type");
  }

  if (!j["parameterType"].is_string()) throw HintParseError("hint parameterType has wrong type");
  auto kind = parse_param_kind(j["parameterType"].get<std::string>());
  if (!kind)
    throw HintParseError("hint parameterType not one of path/query/header/body: '" +
                         j["parameterType"].get<std::string>() + "'");
  h.param_kind = *kind;

  const auto& field = j["field"];
  if (field.is_string()) {
    const std::string f = field.get<std::string>();
    if (f.empty()) throw HintParseError("hint field is empty");
    h.field_path = h.param_kind == ParamKind::Body ? split_dotted(f) : std::vector<std::string>{f};
  } else if (field.is_array()) {
    for (const auto& seg : field) {
      if (seg.is_string()) h.field_path.push_back(seg.get<std::string>());
      else if (seg.is_number_integer()) h.field_path.push_back(std::to_string(seg.get<std::int64_t>()));
      else throw HintParseError("hint field segment has wrong type");
    }
    if (h.field_path.empty()) throw HintParseError("hint field is empty");
  } else {
    throw HintParseError("hint field has wrong type");
  }

  h.new_value = TypedValue::from_json(j["newValue"]);
  h.validate();
  return h;
}

}  // namespace

MutationHint parse_hint(const std::string& response) {
  std::size_t pos = 0;
  std::string last_error = "no JSON object found in response";
  while ((pos = response.find('{', pos)) != std::string::npos) {
    std::size_t end = find_object_end(response, pos);
    if (end == std::string::npos) break;
    nlohmann::json j = nlohmann::json::parse(response.substr(pos, end - pos), nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      try {
        return hint_from_object(j);
      } catch (const HintParseError& e) {
        last_error = e.what();
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
    ++pos;
  }
  throw HintParseError(last_error);
}

}  // namespace miohint
