#include "miohint/target.hpp"

#include <regex>

#include "miohint/errors.hpp"

namespace miohint {

const char* to_string(TargetKind kind) {
  return kind == TargetKind::Branch ? "Branch" : "MethodReplacement";
}

const char* to_string(Expected expected) {
  switch (expected) {
    case Expected::TrueSide: return "TrueSide";
    case Expected::FalseSide: return "FalseSide";
    case Expected::ReturnsTrue: return "ReturnsTrue";
    case Expected::ReturnsFalse: return "ReturnsFalse";
  }
  return "?";
}

bool Target::valid() const {
  if (line < 1 || position < 0 || class_name.empty()) return false;
  bool branch_side = expected == Expected::TrueSide || expected == Expected::FalseSide;
  return (kind == TargetKind::Branch) == branch_side;
}

std::string render_target_id(const Target& t) {
  std::string s;
  s += to_string(t.kind);
  s += "_at_";
  s += t.class_name;
  s += "_at_line_";
  s += std::to_string(t.line);
  s += "_position_";
  s += std::to_string(t.position);
  s += "_";
  s += to_string(t.expected);
  return s;
}

Target parse_target_id(const std::string& s) {
  // Kind first, so unsupported kinds are reported as such even when the rest
  // of the id is malformed too.
  const std::size_t kind_end = s.find("_at_");
  if (kind_end == std::string::npos)
    throw MalformedTargetId("malformed target id (no kind prefix): " + s);
  const std::string kind = s.substr(0, kind_end);
  if (kind != "Branch" && kind != "MethodReplacement")
    throw MalformedTargetId("malformed target id (unsupported kind '" + kind + "'): " + s);

  // The greedy class group binds the last `_at_line_..._position_..._<side>`
  // suffix, so class names containing the marker substrings still round-trip.
  static const std::regex re(
      R"(^(Branch|MethodReplacement)_at_(.+)_at_line_(\d+)_position_(\d+)_(TrueSide|FalseSide|ReturnsTrue|ReturnsFalse)$)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw MalformedTargetId("malformed target id (expected <Kind>_at_<class>_at_line_<n>_position_<n>_<expected>): " + s);

  Target t;
  t.kind = kind == "Branch" ? TargetKind::Branch : TargetKind::MethodReplacement;

  t.class_name = m[2];
  try {
    t.line = std::stoi(m[3]);
    t.position = std::stoi(m[4]);
  } catch (const std::exception&) {
    throw MalformedTargetId("malformed target id (numeric field out of range): " + s);
  }

  const std::string expected = m[5];
  if (expected == "TrueSide") t.expected = Expected::TrueSide;
  else if (expected == "FalseSide") t.expected = Expected::FalseSide;
  else if (expected == "ReturnsTrue") t.expected = Expected::ReturnsTrue;
  else t.expected = Expected::ReturnsFalse;

  if (t.line < 1) throw MalformedTargetId("malformed target id (line must be >= 1): " + s);
  bool branch_side = t.expected == Expected::TrueSide || t.expected == Expected::FalseSide;
  if ((t.kind == TargetKind::Branch) != branch_side)
    throw MalformedTargetId("malformed target id (expected value does not match kind): " + s);
  return t;
}

}  // namespace miohint
