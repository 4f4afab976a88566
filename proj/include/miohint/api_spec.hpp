#pragma once

#include <string>
#include <vector>

#include "miohint/rest.hpp"
#include "miohint/typed_value.hpp"

namespace miohint {

// One declared request field. `bind` is the name the MSL code reads it
// under (request.<bind>); it defaults to `name` and exists so wire names
// like "X-Api-Key" can map to identifier-shaped bindings.
struct FieldSpec {
  std::string name;
  ValueTag type = ValueTag::Str;  // scalar tags only
  bool required = true;
  std::string bind;

  const std::string& bind_name() const { return bind.empty() ? name : bind; }
};

struct EndpointSpec {
  HttpVerb verb = HttpVerb::Get;
  std::string path_template;
  std::string entry_function;
  std::vector<FieldSpec> path_fields;
  std::vector<FieldSpec> query_fields;
  std::vector<FieldSpec> header_fields;
  std::vector<FieldSpec> body_fields;
};

struct ServiceSpec {
  std::string name;
  std::vector<std::string> sources;  // .msl files relative to the spec file
  std::vector<EndpointSpec> endpoints;

  // Parses a service.json file; throws SpecError on schema problems.
  static ServiceSpec load_file(const std::string& path);
  static ServiceSpec from_json(const nlohmann::json& j);
};

}  // namespace miohint
