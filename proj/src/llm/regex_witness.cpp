#include "miohint/llm/regex_witness.hpp"

#include <cctype>

namespace miohint::llm {

namespace {

struct Gen {
  const std::string& pattern;
  const std::map<int, std::string>& overrides;
  std::size_t pos = 0;
  int group_counter = 0;
  bool failed = false;

  bool at_end() const { return pos >= pattern.size(); }
  char peek() const { return pattern[pos]; }

  // One character satisfying the escape, or 0 on failure.
  char escape_char(char e) {
    switch (e) {
      case 'd': return '0';
      case 'w': return 'a';
      case 's': return ' ';
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case 'D': return 'a';
      case 'W': return ' ';
      case 'S': return 'a';
      default:
        if (std::isalnum(static_cast<unsigned char>(e))) return 0;  // unknown escape class
        return e;  // escaped punctuation matches itself
    }
  }

  // Parses a character class at pattern[pos] == '['; returns one member (or
  // a non-member for negated classes).
  std::optional<char> parse_class() {
    ++pos;  // '['
    bool negated = false;
    if (!at_end() && peek() == '^') {
      negated = true;
      ++pos;
    }
    std::string members;
    bool first = true;
    while (!at_end() && (peek() != ']' || first)) {
      first = false;
      char c = peek();
      if (c == '\\') {
        ++pos;
        if (at_end()) return std::nullopt;
        char e = pattern[pos];
        ++pos;
        if (e == 'd') { members += "0123456789"; continue; }
        if (e == 'w') { members += "abc0123456789_"; continue; }
        if (e == 's') { members += " \t"; continue; }
        members.push_back(escape_char(e) ? escape_char(e) : e);
        continue;
      }
      ++pos;
      if (!at_end() && peek() == '-' && pos + 1 < pattern.size() && pattern[pos + 1] != ']') {
        char lo = c;
        ++pos;  // '-'
        char hi = peek();
        ++pos;
        if (lo > hi) return std::nullopt;
        for (int m = lo; m <= hi; ++m) members.push_back(static_cast<char>(m));
      } else {
        members.push_back(c);
      }
    }
    if (at_end() || peek() != ']') return std::nullopt;
    ++pos;  // ']'
    if (!negated) {
      if (members.empty()) return std::nullopt;
      return members.front();
    }
    for (char c : std::string("a0A _-zZ9.")) {
      if (members.find(c) == std::string::npos) return c;
    }
    return std::nullopt;
  }

  // Parses {n}, {n,}, {n,m}; returns the minimum count.
  std::optional<int> parse_brace_quantifier() {
    ++pos;  // '{'
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      digits.push_back(peek());
      ++pos;
    }
    if (digits.empty()) return std::nullopt;
    while (!at_end() && peek() != '}') ++pos;  // skip ",m"
    if (at_end()) return std::nullopt;
    ++pos;  // '}'
    return std::stoi(digits);
  }

  // Returns the minimum repetitions for a quantifier following an atom;
  // 1 when there is none.
  std::optional<int> quantifier_min() {
    if (at_end()) return 1;
    char c = peek();
    if (c == '*') { ++pos; maybe_lazy(); return 0; }
    if (c == '+') { ++pos; maybe_lazy(); return 1; }
    if (c == '?') { ++pos; maybe_lazy(); return 0; }
    if (c == '{') {
      auto n = parse_brace_quantifier();
      if (!n) return std::nullopt;
      maybe_lazy();
      return n;
    }
    return 1;
  }

  void maybe_lazy() {
    if (!at_end() && peek() == '?') ++pos;
  }

  std::optional<std::string> alternation() {
    auto first = sequence();
    if (!first) return std::nullopt;
    // Remaining branches are parsed (to keep positions right) but unused.
    while (!at_end() && peek() == '|') {
      ++pos;
      if (!sequence()) return std::nullopt;
    }
    return first;
  }

  std::optional<std::string> sequence() {
    std::string out;
    while (!at_end() && peek() != '|' && peek() != ')') {
      char c = peek();
      if (c == '^' || c == '$') { ++pos; continue; }

      std::string atom;
      bool group_overridden = false;
      if (c == '(') {
        ++pos;
        bool capturing = true;
        if (!at_end() && peek() == '?') {
          ++pos;
          if (at_end()) return std::nullopt;
          if (peek() == ':') { capturing = false; ++pos; }
          else return std::nullopt;  // lookaheads and friends: unsupported
        }
        int group_index = capturing ? ++group_counter : 0;
        auto inner = alternation();
        if (!inner || at_end() || peek() != ')') return std::nullopt;
        ++pos;  // ')'
        if (capturing) {
          auto ov = overrides.find(group_index);
          if (ov != overrides.end()) {
            atom = ov->second;
            group_overridden = true;
          } else {
            atom = *inner;
          }
        } else {
          atom = *inner;
        }
      } else if (c == '[') {
        auto m = parse_class();
        if (!m) return std::nullopt;
        atom = std::string(1, *m);
      } else if (c == '\\') {
        ++pos;
        if (at_end()) return std::nullopt;
        char e = pattern[pos];
        ++pos;
        if (std::isdigit(static_cast<unsigned char>(e))) return std::nullopt;  // backreference
        char ch = escape_char(e);
        if (ch == 0) return std::nullopt;
        atom = std::string(1, ch);
      } else if (c == '.') {
        ++pos;
        atom = "a";
      } else if (c == ')') {
        return std::nullopt;
      } else {
        ++pos;
        atom = std::string(1, c);
      }

      auto reps = quantifier_min();
      if (!reps) return std::nullopt;
      int count = *reps;
      // A pinned group must appear even under a ? or * quantifier.
      if (group_overridden && count == 0) count = 1;
      for (int i = 0; i < count; ++i) out += atom;
    }
    return out;
  }
};

}  // namespace

std::optional<std::string> regex_witness(const std::string& pattern,
                                         const std::map<int, std::string>& group_overrides) {
  Gen gen{pattern, group_overrides};
  auto result = gen.alternation();
  if (!result || !gen.at_end()) return std::nullopt;
  return result;
}

}  // namespace miohint::llm
