#pragma once

#include <map>
#include <optional>
#include <string>

namespace miohint::llm {

// Builds a string intended to match `pattern` (ECMAScript syntax, the subset
// the MSL builtins use: literals, escapes, character classes, groups,
// alternation, anchors, and the *, +, ?, {n}, {n,m} quantifiers). Quantifiers
// generate their minimum repetitions; alternations take the first branch.
//
// `group_overrides` substitutes the content of capture groups (1-based) so a
// caller can pin, say, the digits captured by `(\d+)`. Overrides are not
// validated against the group's own pattern; callers re-check the final
// string with a real regex engine.
//
// Returns nullopt on constructs outside the subset.
std::optional<std::string> regex_witness(const std::string& pattern,
                                         const std::map<int, std::string>& group_overrides = {});

}  // namespace miohint::llm
