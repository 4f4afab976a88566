#include "miohint/harness/service.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "miohint/errors.hpp"
#include "miohint/msl/parser.hpp"

namespace miohint {

namespace {

ValueTag parse_type_tag(const std::string& s) {
  if (s == "str") return ValueTag::Str;
  if (s == "int") return ValueTag::Int;
  if (s == "float") return ValueTag::Float;
  if (s == "bool") return ValueTag::Bool;
  throw SpecError("field type must be str|int|float|bool, got '" + s + "'");
}

std::vector<FieldSpec> parse_fields(const nlohmann::json& j) {
  std::vector<FieldSpec> out;
  if (j.is_null()) return out;
  for (const auto& f : j) {
    FieldSpec fs;
    fs.name = f.at("name").get<std::string>();
    fs.type = parse_type_tag(f.value("type", "str"));
    fs.required = f.value("required", true);
    fs.bind = f.value("bind", "");
    out.push_back(std::move(fs));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dirname_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

std::string unit_name_of(const std::string& source_path) {
  auto slash = source_path.find_last_of('/');
  std::string base = slash == std::string::npos ? source_path : source_path.substr(slash + 1);
  if (base.size() > 4 && base.substr(base.size() - 4) == ".msl") base.resize(base.size() - 4);
  return base;
}

// Strict scalar coercion from a wire string.
std::optional<TypedValue> coerce_wire(const std::string& s, ValueTag want) {
  try {
    switch (want) {
      case ValueTag::Str:
        return TypedValue(s);
      case ValueTag::Int: {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return TypedValue(v);
      }
      case ValueTag::Float: {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return TypedValue(v);
      }
      case ValueTag::Bool:
        if (s == "true") return TypedValue(true);
        if (s == "false") return TypedValue(false);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<TypedValue> coerce_json(const nlohmann::json& j, ValueTag want) {
  if (j.is_string()) return coerce_wire(j.get<std::string>(), want);
  switch (want) {
    case ValueTag::Str:
      if (j.is_null()) return std::nullopt;
      return TypedValue(nlohmann::json(j).dump());
    case ValueTag::Int:
      if (j.is_number_integer()) return TypedValue(j.get<std::int64_t>());
      if (j.is_number_unsigned()) return TypedValue(static_cast<std::int64_t>(j.get<std::uint64_t>()));
      return std::nullopt;
    case ValueTag::Float:
      if (j.is_number()) return TypedValue(j.get<double>());
      return std::nullopt;
    case ValueTag::Bool:
      if (j.is_boolean()) return TypedValue(j.get<bool>());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::vector<std::string> split_segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < path.size()) {
    if (path[start] == '/') {
      ++start;
      continue;
    }
    std::size_t end = path.find('/', start);
    if (end == std::string::npos) end = path.size();
    out.push_back(path.substr(start, end - start));
    start = end;
  }
  return out;
}

std::string lower(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

void collect_reachable_request_fields(const msl::MslProgram& program, const msl::FunctionDecl* fn,
                                      std::set<const msl::FunctionDecl*>& seen,
                                      std::set<std::string>& fields);

void fields_in_stmt(const msl::MslProgram& program, const msl::Stmt& s,
                    std::set<const msl::FunctionDecl*>& seen, std::set<std::string>& fields) {
  if (s.expr) {
    std::vector<std::string> fs;
    msl::collect_request_fields(*s.expr, fs);
    fields.insert(fs.begin(), fs.end());
    std::vector<std::string> callees;
    msl::collect_callees(*s.expr, callees);
    for (const auto& callee : callees) {
      if (msl::is_builtin_free(callee)) continue;
      collect_reachable_request_fields(program, program.function(callee), seen, fields);
    }
  }
  for (const auto& c : s.then_body) fields_in_stmt(program, *c, seen, fields);
  for (const auto& c : s.else_body) fields_in_stmt(program, *c, seen, fields);
}

void collect_reachable_request_fields(const msl::MslProgram& program, const msl::FunctionDecl* fn,
                                      std::set<const msl::FunctionDecl*>& seen,
                                      std::set<std::string>& fields) {
  if (!fn || seen.count(fn)) return;
  seen.insert(fn);
  for (const auto& s : fn->body) fields_in_stmt(program, *s, seen, fields);
}

}  // namespace

ServiceSpec ServiceSpec::from_json(const nlohmann::json& j) {
  ServiceSpec spec;
  try {
    spec.name = j.at("name").get<std::string>();
    for (const auto& s : j.at("sources")) spec.sources.push_back(s.get<std::string>());
    for (const auto& e : j.at("endpoints")) {
      EndpointSpec ep;
      auto verb = parse_verb(e.at("verb").get<std::string>());
      if (!verb) throw SpecError("bad verb in endpoint");
      ep.verb = *verb;
      ep.path_template = e.at("path").get<std::string>();
      ep.entry_function = e.at("entry").get<std::string>();
      ep.path_fields = parse_fields(e.value("path_params", nlohmann::json::array()));
      ep.query_fields = parse_fields(e.value("query", nlohmann::json::array()));
      ep.header_fields = parse_fields(e.value("headers", nlohmann::json::array()));
      ep.body_fields = parse_fields(e.value("body", nlohmann::json::array()));
      spec.endpoints.push_back(std::move(ep));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("service spec: ") + e.what());
  }
  return spec;
}

ServiceSpec ServiceSpec::load_file(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw SpecError("service spec is not valid JSON: " + path);
  return from_json(j);
}

ServiceInstance ServiceInstance::load_dir(const std::string& dir) {
  ServiceSpec spec = ServiceSpec::load_file(dir + "/service.json");
  std::map<std::string, std::string> sources;
  for (const auto& rel : spec.sources)
    sources[unit_name_of(rel)] = read_file(dir + "/" + rel);
  (void)dirname_of(dir);
  return load(std::move(spec), sources);
}

ServiceInstance ServiceInstance::load(ServiceSpec spec,
                                      const std::map<std::string, std::string>& sources) {
  ServiceInstance si;
  si.spec_ = std::move(spec);
  for (const auto& [unit, text] : sources) si.program_.add_unit(msl::parse_unit(text, unit));
  si.validate_and_index();
  return si;
}

void ServiceInstance::validate_and_index() {
  std::set<std::pair<HttpVerb, std::string>> routes;
  for (const auto& ep : spec_.endpoints) {
    if (!routes.insert({ep.verb, ep.path_template}).second)
      throw SpecError("duplicate endpoint " + std::string(to_string(ep.verb)) + " " +
                      ep.path_template);
    const msl::FunctionDecl* entry = program_.function(ep.entry_function);
    if (!entry)
      throw SpecError("entry function '" + ep.entry_function + "' not found for " +
                      ep.path_template);
    if (!entry->params.empty())
      throw SpecError("entry function '" + ep.entry_function + "' must take no parameters");

    // Every template parameter needs a declared path field.
    for (const auto& name : template_param_names(ep.path_template)) {
      bool found = false;
      for (const auto& f : ep.path_fields) found = found || f.name == name;
      if (!found)
        throw SpecError("endpoint " + ep.path_template + ": no schema for path param '" + name +
                        "'");
    }

    // The schema must cover every request field the reachable code reads.
    std::set<const msl::FunctionDecl*> seen;
    std::set<std::string> accessed;
    collect_reachable_request_fields(program_, entry, seen, accessed);
    std::set<std::string> declared;
    for (const auto* fields : {&ep.path_fields, &ep.query_fields, &ep.header_fields, &ep.body_fields})
      for (const auto& f : *fields) declared.insert(f.bind_name());
    for (const auto& a : accessed)
      if (!declared.count(a))
        throw SpecError("endpoint " + ep.path_template + ": code reads request." + a +
                        " but the schema does not declare it");
  }
  targets_ = program_.enumerate_targets();
  total_lines_ = static_cast<int>(program_.executable_lines().size());
}

RequestOutcome ServiceInstance::handle_request(const RestCallAction& action) {
  std::map<std::string, std::string> query;
  for (const auto& [k, v] : action.query_params) query[k] = v.to_wire_string();
  std::vector<std::pair<std::string, std::string>> headers;
  for (const auto& [k, v] : action.headers) headers.emplace_back(k, v.to_wire_string());
  return handle_wire(action.verb, action.rendered_path(), query, headers, action.body.to_json());
}

RequestOutcome ServiceInstance::handle_wire(
    HttpVerb verb, const std::string& concrete_path, const std::map<std::string, std::string>& query,
    const std::vector<std::pair<std::string, std::string>>& headers, const nlohmann::json& body) {
  RequestOutcome out;
  CoverageSnapshot before = coverage_.snapshot();

  // Route by segment match against the endpoint templates.
  const EndpointSpec* endpoint = nullptr;
  std::map<std::string, std::string> path_values;
  std::vector<std::string> segments = split_segments(concrete_path);
  for (const auto& ep : spec_.endpoints) {
    if (ep.verb != verb) continue;
    std::vector<std::string> tmpl = split_segments(ep.path_template);
    if (tmpl.size() != segments.size()) continue;
    bool match = true;
    std::map<std::string, std::string> values;
    for (std::size_t i = 0; i < tmpl.size() && match; ++i) {
      if (tmpl[i].size() >= 2 && tmpl[i].front() == '{' && tmpl[i].back() == '}')
        values[tmpl[i].substr(1, tmpl[i].size() - 2)] = segments[i];
      else if (tmpl[i] != segments[i])
        match = false;
    }
    if (match) {
      endpoint = &ep;
      path_values = std::move(values);
      break;
    }
  }
  if (!endpoint) {
    out.status = 404;
    out.body["error"] = "no endpoint for " + std::string(to_string(verb)) + " " + concrete_path;
    return out;
  }

  // Bind declared fields.
  std::map<std::string, TypedValue> env;
  auto fail400 = [&](const std::string& msg) {
    out.status = 400;
    out.body["error"] = msg;
    out.delta = CoverageSnapshot{};
    return out;
  };

  for (const auto& f : endpoint->path_fields) {
    auto it = path_values.find(f.name);
    if (it == path_values.end()) {
      if (f.required) return fail400("missing path param '" + f.name + "'");
      env[f.bind_name()] = TypedValue(nullptr);
      continue;
    }
    auto v = coerce_wire(it->second, f.type);
    if (!v) return fail400("path param '" + f.name + "' is not a valid " + to_string(f.type));
    env[f.bind_name()] = *v;
  }
  for (const auto& f : endpoint->query_fields) {
    auto it = query.find(f.name);
    if (it == query.end()) {
      if (f.required) return fail400("missing query param '" + f.name + "'");
      env[f.bind_name()] = TypedValue(nullptr);
      continue;
    }
    auto v = coerce_wire(it->second, f.type);
    if (!v) return fail400("query param '" + f.name + "' is not a valid " + to_string(f.type));
    env[f.bind_name()] = *v;
  }
  for (const auto& f : endpoint->header_fields) {
    const std::string want = lower(f.name);
    const std::string* raw = nullptr;
    for (const auto& [k, v] : headers)
      if (lower(k) == want) {
        raw = &v;
        break;
      }
    if (!raw) {
      if (f.required) return fail400("missing header '" + f.name + "'");
      env[f.bind_name()] = TypedValue(nullptr);
      continue;
    }
    auto v = coerce_wire(*raw, f.type);
    if (!v) return fail400("header '" + f.name + "' is not a valid " + to_string(f.type));
    env[f.bind_name()] = *v;
  }
  if (!endpoint->body_fields.empty()) {
    if (!body.is_object()) return fail400("request body must be a JSON object");
    for (const auto& f : endpoint->body_fields) {
      if (!body.contains(f.name)) {
        if (f.required) return fail400("missing body field '" + f.name + "'");
        env[f.bind_name()] = TypedValue(nullptr);
        continue;
      }
      auto v = coerce_json(body[f.name], f.type);
      if (!v) return fail400("body field '" + f.name + "' is not a valid " + to_string(f.type));
      env[f.bind_name()] = *v;
    }
  }

  msl::Interpreter interp(program_, &coverage_);
  try {
    TypedValue result = interp.call_function(endpoint->entry_function, env);
    out.status = 200;
    out.body["result"] = result.to_json();
  } catch (const msl::RuntimeError& e) {
    out.status = 500;
    out.body["error"] = e.what();
  }

  CoverageSnapshot after = coverage_.snapshot();
  for (const auto& t : after.covered_targets)
    if (!before.covered_targets.count(t)) out.delta.covered_targets.insert(t);
  for (const auto& l : after.covered_lines)
    if (!before.covered_lines.count(l)) out.delta.covered_lines.insert(l);
  return out;
}

void ServiceInstance::reset_coverage() { coverage_.reset(); }

nlohmann::ordered_json ServiceInstance::coverage_json() const {
  nlohmann::ordered_json j;
  j["covered_targets"] = nlohmann::json::array();
  for (const auto& t : coverage_.covered) j["covered_targets"].push_back(render_target_id(t));
  j["covered_lines"] = nlohmann::ordered_json::array();
  for (const auto& [unit, line] : coverage_.lines)
    j["covered_lines"].push_back(nlohmann::ordered_json::array({unit, line}));
  j["scores"] = nlohmann::ordered_json::object();
  for (const auto& [t, s] : coverage_.scores)
    if (s > 0.0) j["scores"][render_target_id(t)] = s;
  return j;
}

ExecutionResult InProcessEvaluator::evaluate(const TestCase& tc) {
  auto start = std::chrono::steady_clock::now();
  service_.reset_coverage();
  ExecutionResult result;
  for (const auto& action : tc.actions)
    result.statuses.push_back(service_.handle_request(action).status);
  result.snapshot = service_.snapshot();
  result.scores = service_.scores();
  result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

CorpusManifest CorpusManifest::load_file(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw SpecError("manifest is not valid JSON: " + path);
  CorpusManifest m;
  try {
    m.service = j.at("service").get<std::string>();
    m.requires_chain = j.value("requires_chain", false);
    for (const auto& e : j.at("hard_targets")) {
      ManifestEntry entry;
      entry.target = parse_target_id(e.at("id").get<std::string>());
      entry.witness = RestCallAction::from_json(e.at("witness"));
      m.hard_targets.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::vector<std::string> CorpusManifest::hard_target_ids() const {
  std::vector<std::string> out;
  for (const auto& e : hard_targets) out.push_back(render_target_id(e.target));
  return out;
}

}  // namespace miohint
