#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "miohint/rest.hpp"
#include "miohint/typed_value.hpp"

namespace miohint {

// Structured mutation directive: which action, which parameter kind, which
// field, and the new value to put there.
struct MutationHint {
  int action_index = 0;
  ParamKind param_kind = ParamKind::Body;
  std::vector<std::string> field_path;  // non-empty; one segment for Path/Query/Header
  TypedValue new_value;

  void validate() const;
  std::string field_joined() const;  // dotted form for display
  nlohmann::ordered_json to_json() const;
};

// Extracts the first well-formed hint object from model output, tolerating
// surrounding prose and fenced code blocks. Throws HintParseError when no
// object with the required keys (action, parameterType, field, newValue)
// can be found.
MutationHint parse_hint(const std::string& response);

}  // namespace miohint
