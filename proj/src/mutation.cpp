#include "miohint/mutation.hpp"

#include <algorithm>

#include "miohint/errors.hpp"

namespace miohint {

void MutationConfig::validate() const {
  if (weight_delta < 0 || weight_resample < 0 || weight_delta + weight_resample <= 0)
    throw Error("mutation config: operator weights must be non-negative with at least one positive");
  if (charset.empty()) throw Error("mutation config: empty charset");
}

namespace {

TypedValue sample_value(const FieldSpec& field, const MutationConfig& cfg, Rng& rng) {
  switch (field.type) {
    case ValueTag::Str:
      return TypedValue("_EM_" + std::to_string(rand_below(rng, 1000000)) + "_XYZ");
    case ValueTag::Int:
      return TypedValue(rand_range(rng, cfg.int_init_min, cfg.int_init_max));
    case ValueTag::Float:
      return TypedValue(cfg.int_init_min + rand_unit(rng) * (cfg.int_init_max - cfg.int_init_min));
    case ValueTag::Bool:
      return TypedValue((rng() & 1) != 0);
    default:
      return TypedValue(nullptr);
  }
}

std::string mutate_string(const std::string& input, const MutationConfig& cfg, Rng& rng) {
  if (input.empty()) return std::string(1, cfg.charset[rand_below(rng, cfg.charset.size())]);
  std::string out = input;
  int count = 1 + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(cfg.max_string_positions)));
  for (int i = 0; i < count; ++i) {
    std::size_t pos = rand_below(rng, out.size());
    char old = out[pos];
    char next = old;
    while (next == old) next = cfg.charset[rand_below(rng, cfg.charset.size())];
    out[pos] = next;
  }
  return out;
}

std::int64_t mutate_int(std::int64_t v, const MutationConfig& cfg, Rng& rng) {
  bool use_delta =
      static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(cfg.weight_delta + cfg.weight_resample))) <
      cfg.weight_delta;
  if (use_delta) {
    std::int64_t d = rand_range(rng, 1, cfg.int_delta_max);
    return (rng() & 1) ? v + d : v - d;
  }
  std::int64_t next = rand_range(rng, cfg.int_resample_min, cfg.int_resample_max);
  return next == v ? next + 1 : next;
}

double mutate_float(double v, const MutationConfig& cfg, Rng& rng) {
  bool use_delta =
      static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(cfg.weight_delta + cfg.weight_resample))) <
      cfg.weight_delta;
  double next;
  if (use_delta) {
    double d = rand_unit(rng) * cfg.float_delta_max;
    next = (rng() & 1) ? v + d : v - d;
  } else {
    next = cfg.float_resample_min + rand_unit(rng) * (cfg.float_resample_max - cfg.float_resample_min);
  }
  return next == v ? next + 1.0 : next;
}

}  // namespace

TestCase sample_random_test_case(const std::vector<EndpointSpec>& apis,
                                 const MutationConfig& config, Rng& rng) {
  if (apis.empty()) throw Error("sample_random_test_case: empty endpoint list");
  config.validate();
  TestCase tc;
  tc.provenance = Provenance::RandomInit;
  int count = 1 + static_cast<int>(rand_below(rng, 3));
  for (int i = 0; i < count; ++i) {
    const EndpointSpec& ep = apis[rand_below(rng, apis.size())];
    RestCallAction a;
    a.verb = ep.verb;
    a.path_template = ep.path_template;
    for (const auto& f : ep.path_fields) a.path_params[f.name] = sample_value(f, config, rng);
    for (const auto& f : ep.query_fields) a.query_params[f.name] = sample_value(f, config, rng);
    for (const auto& f : ep.header_fields) a.headers[f.name] = sample_value(f, config, rng);
    if (!ep.body_fields.empty()) {
      TypedValue::Object body;
      for (const auto& f : ep.body_fields) body[f.name] = sample_value(f, config, rng);
      a.body = TypedValue(std::move(body));
    }
    tc.actions.push_back(std::move(a));
  }
  return tc;
}

TestCase random_mutate(const TestCase& tc, const std::vector<EndpointSpec>& /*apis*/,
                       const MutationConfig& config, Rng& rng) {
  config.validate();
  tc.validate();
  TestCase out = tc;
  out.provenance = Provenance::RandomMutation;

  std::vector<std::pair<std::size_t, FieldRef>> leaves;
  for (std::size_t i = 0; i < out.actions.size(); ++i)
    for (auto& ref : enumerate_leaf_fields(out.actions[i])) leaves.emplace_back(i, std::move(ref));
  if (leaves.empty()) return out;

  auto& [action_idx, ref] = leaves[rand_below(rng, leaves.size())];
  RestCallAction& action = out.actions[action_idx];
  const TypedValue& current = get_field(action, ref);
  TypedValue next;
  switch (current.tag()) {
    case ValueTag::Str: next = TypedValue(mutate_string(current.as_str(), config, rng)); break;
    case ValueTag::Int: next = TypedValue(mutate_int(current.as_int(), config, rng)); break;
    case ValueTag::Float: next = TypedValue(mutate_float(current.as_float(), config, rng)); break;
    case ValueTag::Bool: next = TypedValue(!current.as_bool()); break;
    default: next = TypedValue(rand_range(rng, config.int_init_min, config.int_init_max)); break;
  }
  set_field(action, ref, std::move(next));
  return out;
}

void MutationHint::validate() const {
  if (field_path.empty()) throw Error("hint: empty field path");
  if (param_kind != ParamKind::Body && field_path.size() != 1)
    throw Error("hint: path/query/header field must be a single name");
  if (action_index < 0) throw Error("hint: negative action index");
}

std::string MutationHint::field_joined() const {
  std::string out;
  for (std::size_t i = 0; i < field_path.size(); ++i) {
    if (i) out += ".";
    out += field_path[i];
  }
  return out;
}

nlohmann::ordered_json MutationHint::to_json() const {
  nlohmann::ordered_json j;
  j["action"] = action_index;
  j["parameterType"] = to_string(param_kind);
  j["field"] = field_joined();
  j["newValue"] = new_value.to_json();
  return j;
}

namespace {

// Coerces `value` toward the tag of the field it replaces. Model output
// arrives as strings more often than not; a parseable string beats a
// rejection, and anything unparseable is kept as its string rendering.
TypedValue coerce_for_slot(const TypedValue& current, const TypedValue& value) {
  ValueTag want = current.tag();
  ValueTag got = value.tag();
  if (want == got || want == ValueTag::Null) return value;
  if (want == ValueTag::Str) {
    if (got == ValueTag::Null) return value;
    return TypedValue(value.to_wire_string());
  }
  if (got == ValueTag::Str) {
    const std::string& s = value.as_str();
    try {
      if (want == ValueTag::Int) {
        std::size_t pos = 0;
        std::int64_t n = std::stoll(s, &pos);
        if (pos == s.size()) return TypedValue(n);
      } else if (want == ValueTag::Float) {
        std::size_t pos = 0;
        double d = std::stod(s, &pos);
        if (pos == s.size()) return TypedValue(d);
      } else if (want == ValueTag::Bool) {
        if (s == "true") return TypedValue(true);
        if (s == "false") return TypedValue(false);
      }
    } catch (const std::exception&) {
    }
    return value;  // stored as string
  }
  if (want == ValueTag::Int && got == ValueTag::Float) {
    double d = value.as_float();
    if (d == static_cast<double>(static_cast<std::int64_t>(d)))
      return TypedValue(static_cast<std::int64_t>(d));
  }
  if (want == ValueTag::Float && got == ValueTag::Int)
    return TypedValue(static_cast<double>(value.as_int()));
  return value;
}

}  // namespace

TestCase apply_hint(const TestCase& tc, const MutationHint& hint) {
  hint.validate();
  tc.validate();
  if (hint.action_index >= static_cast<int>(tc.actions.size())) {
    std::vector<std::string> available;
    for (std::size_t i = 0; i < tc.actions.size(); ++i) available.push_back(std::to_string(i));
    throw NoSuchField("no action at index " + std::to_string(hint.action_index), available);
  }
  TestCase out = tc;
  out.provenance = Provenance::LlmMutation;
  RestCallAction& action = out.actions[static_cast<std::size_t>(hint.action_index)];
  FieldRef ref{hint.param_kind, hint.field_path};
  const TypedValue& current = get_field(action, ref);
  set_field(action, ref, coerce_for_slot(current, hint.new_value));
  return out;
}

}  // namespace miohint
