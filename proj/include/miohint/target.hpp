#pragma once

#include <string>
#include <tuple>

namespace miohint {

enum class TargetKind { Branch, MethodReplacement };

// Expected outcome of a coverage target: TrueSide/FalseSide for branches,
// ReturnsTrue/ReturnsFalse for replaced boolean method calls.
enum class Expected { TrueSide, FalseSide, ReturnsTrue, ReturnsFalse };

const char* to_string(TargetKind kind);
const char* to_string(Expected expected);

// One coverable program point. Identity is the five fields below; the
// canonical string form is produced by render_target_id.
struct Target {
  TargetKind kind = TargetKind::Branch;
  std::string class_name;  // dotted source-unit name
  int line = 1;            // 1-based
  int position = 0;        // ordinal of the decision point within the line
  Expected expected = Expected::TrueSide;

  bool valid() const;

  friend bool operator==(const Target& a, const Target& b) {
    return a.kind == b.kind && a.class_name == b.class_name && a.line == b.line &&
           a.position == b.position && a.expected == b.expected;
  }
  friend bool operator<(const Target& a, const Target& b) {
    return std::tie(a.class_name, a.line, a.position, a.kind, a.expected) <
           std::tie(b.class_name, b.line, b.position, b.kind, b.expected);
  }
};

// Canonical id: `<Kind>_at_<class>_at_line_<line>_position_<pos>_<expected>`.
std::string render_target_id(const Target& t);

// Inverse of render_target_id on its image; throws MalformedTargetId with the
// failing component otherwise.
Target parse_target_id(const std::string& s);

}  // namespace miohint
