#include "miohint/llm/solver_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "miohint/hint.hpp"
#include "miohint/llm/regex_witness.hpp"
#include "miohint/msl/interp.hpp"
#include "miohint/msl/parser.hpp"
#include "miohint/rest.hpp"
#include "miohint/target.hpp"

namespace miohint::llm {

namespace {

constexpr const char* kRefusal =
    "I am unable to determine a satisfying mutation from the given context.";

constexpr int kMaxSubstDepth = 12;
constexpr std::size_t kMaxVariants = 8;
constexpr std::size_t kMaxCandidates = 48;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_field_name(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// ---------------------------------------------------------------------------
// Prompt-context parsing. The context block is the labeled bundle rendered by
// RelatedCode::to_text() followed by one JSON action per line.

struct ParsedContext {
  Target target;
  std::string line_code;
  std::vector<std::string> chain_lines;
  std::string called_defs;   // raw block
  std::string function_code; // raw block
  std::vector<nlohmann::json> actions;
};

std::optional<ParsedContext> parse_context(const std::string& context) {
  ParsedContext out;
  std::istringstream ss(context);
  std::string line;
  enum class Section { None, Chain, Called, Function, Actions } section = Section::None;
  bool have_target = false;
  while (std::getline(ss, line)) {
    if (line.rfind("Target: ", 0) == 0) {
      try {
        out.target = parse_target_id(trim(line.substr(8)));
        have_target = true;
      } catch (const Error&) {
        return std::nullopt;
      }
      continue;
    }
    if (line.rfind("LineCode: ", 0) == 0) {
      out.line_code = trim(line.substr(10));
      continue;
    }
    if (line == "DefUseChain:") { section = Section::Chain; continue; }
    if (line == "CalledFunctionDefinition:") { section = Section::Called; continue; }
    if (line == "FunctionCode:") { section = Section::Function; continue; }
    if (line == "RestCallActions:") { section = Section::Actions; continue; }
    switch (section) {
      case Section::Chain: {
        std::string t = trim(line);
        if (!t.empty() && t != "(empty)") out.chain_lines.push_back(t);
        break;
      }
      case Section::Called:
        if (trim(line) != "(none)") out.called_defs += line + "\n";
        break;
      case Section::Function:
        out.function_code += line + "\n";
        break;
      case Section::Actions: {
        std::string t = trim(line);
        if (t.empty()) break;
        nlohmann::json j = nlohmann::json::parse(t, nullptr, false);
        if (!j.is_discarded() && j.is_object()) out.actions.push_back(std::move(j));
        break;
      }
      default:
        break;
    }
  }
  if (!have_target || out.line_code.empty() || out.function_code.empty() || out.actions.empty())
    return std::nullopt;
  return out;
}

// Splits a code blob into top-level blocks (const lines and fun..closing
// brace) so duplicate function names across sections can be dropped.
std::vector<std::string> split_decl_blocks(const std::string& code) {
  std::vector<std::string> blocks;
  std::istringstream ss(code);
  std::string line, current;
  int depth = 0;
  auto flush = [&]() {
    if (!trim(current).empty()) blocks.push_back(current);
    current.clear();
  };
  while (std::getline(ss, line)) {
    current += line + "\n";
    for (char c : line) {
      if (c == '{') ++depth;
      if (c == '}') --depth;
    }
    std::string t = trim(line);
    if (depth == 0 && !t.empty() && (t.back() == '}' || t.rfind("const ", 0) == 0)) flush();
  }
  flush();
  return blocks;
}

std::optional<std::string> block_function_name(const std::string& block) {
  std::istringstream ss(block);
  std::string line;
  while (std::getline(ss, line)) {
    std::string t = trim(line);
    if (t.rfind("fun ", 0) == 0) {
      std::size_t end = t.find('(');
      if (end != std::string::npos) return trim(t.substr(4, end - 4));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Condition model: a conjunct is an expression that must evaluate to `want`.

struct Conjunct {
  const msl::Expr* expr = nullptr;
  msl::ExprPtr owned;  // for synthesized conjuncts
  bool want = true;
  bool is_target = false;

  const msl::Expr& e() const { return owned ? *owned : *expr; }
};

// Ancestor-if conditions that must hold for control to reach `needle`.
bool collect_path_conditions(const std::vector<msl::StmtPtr>& body, const msl::Stmt* needle,
                             std::vector<std::pair<const msl::Expr*, bool>>& path) {
  for (const auto& s : body) {
    if (s.get() == needle) return true;
    if (s->kind == msl::Stmt::Kind::If) {
      path.emplace_back(s->expr.get(), true);
      if (collect_path_conditions(s->then_body, needle, path)) return true;
      path.back().second = false;
      if (collect_path_conditions(s->else_body, needle, path)) return true;
      path.pop_back();
    }
  }
  return false;
}

void collect_mr_calls(const msl::Expr& e, std::vector<const msl::Expr*>& out) {
  switch (e.kind) {
    case msl::Expr::Kind::MethodCall:
      collect_mr_calls(*e.receiver, out);
      for (const auto& a : e.args) collect_mr_calls(*a, out);
      if (msl::is_mr_builtin(e.name)) out.push_back(&e);
      break;
    case msl::Expr::Kind::Call:
      for (const auto& a : e.args) collect_mr_calls(*a, out);
      break;
    case msl::Expr::Kind::Binary:
      collect_mr_calls(*e.lhs, out);
      collect_mr_calls(*e.rhs, out);
      break;
    case msl::Expr::Kind::Unary:
      collect_mr_calls(*e.operand, out);
      break;
    default:
      break;
  }
}

// Splits want-true conjunctions and want-false disjunctions into atomic
// conjuncts; everything else stays whole.
void flatten_condition(const msl::Expr& e, bool want, bool is_target, std::vector<Conjunct>& out) {
  if (e.kind == msl::Expr::Kind::Unary && e.un_op == msl::UnOp::Not) {
    flatten_condition(*e.operand, !want, is_target, out);
    return;
  }
  if (e.kind == msl::Expr::Kind::Binary &&
      ((e.bin_op == msl::BinOp::And && want) || (e.bin_op == msl::BinOp::Or && !want))) {
    flatten_condition(*e.lhs, want, is_target, out);
    flatten_condition(*e.rhs, want, is_target, out);
    return;
  }
  Conjunct c;
  c.expr = &e;
  c.want = want;
  c.is_target = is_target;
  out.push_back(std::move(c));
}

// ---------------------------------------------------------------------------
// Substitution over the definition environment built from the def-use chain
// and local definitions.

using DefEnv = std::map<std::string, std::vector<const msl::Expr*>>;

void collect_local_defs(const std::vector<msl::StmtPtr>& body, DefEnv& env,
                        std::vector<msl::StmtPtr>* /*unused*/ = nullptr) {
  for (const auto& s : body) {
    if (s->kind == msl::Stmt::Kind::Let || s->kind == msl::Stmt::Kind::Assign)
      env[s->var_name].push_back(s->expr.get());
    collect_local_defs(s->then_body, env);
    collect_local_defs(s->else_body, env);
  }
}

struct Substituter {
  const DefEnv& env;
  std::set<std::string> in_progress;
  bool hit_unresolved = false;

  std::vector<msl::ExprPtr> subst(const msl::Expr& e, int depth) {
    std::vector<msl::ExprPtr> out;
    if (depth > kMaxSubstDepth) return out;
    switch (e.kind) {
      case msl::Expr::Kind::Var: {
        auto it = env.find(e.name);
        if (it == env.end()) {
          hit_unresolved = true;
          return out;
        }
        for (const msl::Expr* def : it->second) {
          if (in_progress.count(e.name)) continue;
          in_progress.insert(e.name);
          auto variants = subst(*def, depth + 1);
          in_progress.erase(e.name);
          for (auto& v : variants) {
            out.push_back(std::move(v));
            if (out.size() >= kMaxVariants) return out;
          }
        }
        return out;
      }
      case msl::Expr::Kind::MethodCall: {
        auto recv = subst(*e.receiver, depth + 1);
        std::vector<std::vector<msl::ExprPtr>> arg_variants;
        for (const auto& a : e.args) arg_variants.push_back(subst(*a, depth + 1));
        for (auto& r : recv) {
          if (!combine_args(e, arg_variants, &r, nullptr, out)) return out;
        }
        return out;
      }
      case msl::Expr::Kind::Call: {
        std::vector<std::vector<msl::ExprPtr>> arg_variants;
        for (const auto& a : e.args) arg_variants.push_back(subst(*a, depth + 1));
        if (!combine_args(e, arg_variants, nullptr, nullptr, out)) return out;
        return out;
      }
      case msl::Expr::Kind::Binary: {
        auto ls = subst(*e.lhs, depth + 1);
        auto rs = subst(*e.rhs, depth + 1);
        for (auto& l : ls) {
          for (auto& r : rs) {
            auto c = msl::clone_expr(e);
            c->lhs = msl::clone_expr(*l);
            c->rhs = msl::clone_expr(*r);
            out.push_back(std::move(c));
            if (out.size() >= kMaxVariants) return out;
          }
        }
        return out;
      }
      case msl::Expr::Kind::Unary: {
        auto os = subst(*e.operand, depth + 1);
        for (auto& o : os) {
          auto c = msl::clone_expr(e);
          c->operand = std::move(o);
          out.push_back(std::move(c));
          if (out.size() >= kMaxVariants) return out;
        }
        return out;
      }
      default:
        out.push_back(msl::clone_expr(e));
        return out;
    }
  }

 private:
  // Cartesian combination of substituted arguments (and receiver) into
  // cloned call nodes. Returns false once the variant cap is reached.
  bool combine_args(const msl::Expr& original,
                    const std::vector<std::vector<msl::ExprPtr>>& arg_variants,
                    msl::ExprPtr* receiver, void*, std::vector<msl::ExprPtr>& out) {
    std::vector<std::size_t> idx(arg_variants.size(), 0);
    for (const auto& av : arg_variants)
      if (av.empty()) return true;  // an argument failed to resolve
    while (true) {
      auto c = msl::clone_expr(original);
      c->args.clear();
      for (std::size_t i = 0; i < arg_variants.size(); ++i)
        c->args.push_back(msl::clone_expr(*arg_variants[i][idx[i]]));
      if (receiver) c->receiver = msl::clone_expr(**receiver);
      out.push_back(std::move(c));
      if (out.size() >= kMaxVariants) return false;
      std::size_t k = 0;
      for (; k < idx.size(); ++k) {
        if (++idx[k] < arg_variants[k].size()) break;
        idx[k] = 0;
      }
      if (k == idx.size()) return true;
      if (idx.empty()) return true;
    }
  }
};

// ---------------------------------------------------------------------------
// Candidate generation.

struct StringShape {
  std::optional<std::string> prefix;
  std::vector<std::string> substrings;
  std::vector<std::pair<std::int64_t, std::string>> placements;  // offset -> literal
  std::vector<std::int64_t> exact_lengths;
};

struct CandidateSet {
  std::vector<TypedValue> values;
  StringShape shape;

  void add(TypedValue v) {
    if (values.size() >= kMaxCandidates) return;
    for (const auto& existing : values)
      if (existing == v) return;
    values.push_back(std::move(v));
  }
};

// The request field referenced by an expression, when there is exactly one
// distinct one.
std::optional<std::string> sole_request_field(const msl::Expr& e) {
  std::vector<std::string> fields;
  msl::collect_request_fields(e, fields);
  if (fields.empty()) return std::nullopt;
  for (const auto& f : fields)
    if (f != fields.front()) return std::nullopt;
  return fields.front();
}

bool is_request_field(const msl::Expr& e) { return e.kind == msl::Expr::Kind::RequestField; }

std::optional<std::string> literal_string(const msl::Expr& e) {
  if (e.kind == msl::Expr::Kind::StrLit) return e.str_val;
  return std::nullopt;
}

msl::BinOp invert(msl::BinOp op) {
  switch (op) {
    case msl::BinOp::Eq: return msl::BinOp::Ne;
    case msl::BinOp::Ne: return msl::BinOp::Eq;
    case msl::BinOp::Lt: return msl::BinOp::Ge;
    case msl::BinOp::Le: return msl::BinOp::Gt;
    case msl::BinOp::Gt: return msl::BinOp::Le;
    case msl::BinOp::Ge: return msl::BinOp::Lt;
    default: return op;
  }
}

std::vector<std::int64_t> solve_int(msl::BinOp op, std::int64_t k) {
  switch (op) {
    case msl::BinOp::Eq: return {k};
    case msl::BinOp::Ne: return {k + 1, 0};
    case msl::BinOp::Lt: return {k - 1, 0};
    case msl::BinOp::Le: return {k, k - 1};
    case msl::BinOp::Gt: return {k + 1};
    case msl::BinOp::Ge: return {k, k + 1};
    default: return {};
  }
}

class CandidateBuilder {
 public:
  CandidateBuilder(msl::Interpreter& interp, const std::map<std::string, TypedValue>& currents)
      : interp_(interp), currents_(currents) {}

  std::map<std::string, CandidateSet>& sets() { return sets_; }

  void scan(const msl::Expr& e, bool want) {
    if (e.kind == msl::Expr::Kind::Unary && e.un_op == msl::UnOp::Not) {
      scan(*e.operand, !want);
      return;
    }
    if (e.kind == msl::Expr::Kind::Binary) {
      if ((e.bin_op == msl::BinOp::And && want) || (e.bin_op == msl::BinOp::Or && !want)) {
        scan(*e.lhs, want);
        scan(*e.rhs, want);
        return;
      }
      if (e.bin_op == msl::BinOp::And || e.bin_op == msl::BinOp::Or) {
        scan(*e.lhs, want);
        scan(*e.rhs, want);
        return;
      }
      if (msl::is_comparison(e.bin_op)) {
        handle_comparison(e, want);
        return;
      }
      return;
    }
    if (e.kind == msl::Expr::Kind::MethodCall && msl::is_mr_builtin(e.name)) {
      handle_string_predicate(e, want);
      return;
    }
    if (e.kind == msl::Expr::Kind::RequestField) {
      // Bare boolean field.
      sets_[e.name].add(TypedValue(want));
      return;
    }
    if (e.kind == msl::Expr::Kind::Call) {
      // A user-call condition: constraints live inside the callee; generic
      // candidates for any fields mentioned in the arguments still apply.
      for (const auto& a : e.args) {
        std::vector<std::string> fields;
        msl::collect_request_fields(*a, fields);
        for (const auto& f : fields) sets_[f];  // ensure the field is considered
      }
    }
  }

  // Generic fallbacks plus shape-composed candidates; call once after all
  // conjuncts were scanned.
  void finalize() {
    for (auto& [field, set] : sets_) {
      compose_shape(field, set);
      auto cur = currents_.find(field);
      bool is_int_field = cur != currents_.end() && cur->second.tag() == ValueTag::Int;
      bool is_bool_field = cur != currents_.end() && cur->second.tag() == ValueTag::Bool;
      bool is_float_field = cur != currents_.end() && cur->second.tag() == ValueTag::Float;
      if (is_bool_field) {
        set.add(TypedValue(true));
        set.add(TypedValue(false));
      } else if (is_int_field) {
        set.add(TypedValue(std::int64_t{0}));
        set.add(TypedValue(std::int64_t{1}));
        set.add(TypedValue(std::int64_t{-1}));
      } else if (is_float_field) {
        set.add(TypedValue(0.0));
        set.add(TypedValue(1.0));
      } else {
        set.add(TypedValue("0"));
        set.add(TypedValue("1"));
        set.add(TypedValue("a"));
        set.add(TypedValue(""));
      }
    }
  }

 private:
  void handle_comparison(const msl::Expr& e, bool want) {
    msl::BinOp op = want ? e.bin_op : invert(e.bin_op);
    // Identify the field side and the constant side.
    const msl::Expr* field_side = nullptr;
    const msl::Expr* const_side = nullptr;
    bool field_on_left = true;
    std::vector<std::string> lf, rf;
    msl::collect_request_fields(*e.lhs, lf);
    msl::collect_request_fields(*e.rhs, rf);
    if (!lf.empty() && rf.empty()) {
      field_side = e.lhs.get();
      const_side = e.rhs.get();
    } else if (lf.empty() && !rf.empty()) {
      field_side = e.rhs.get();
      const_side = e.lhs.get();
      field_on_left = false;
    } else {
      return;
    }
    auto field = sole_request_field(*field_side);
    if (!field) return;

    TypedValue k;
    try {
      k = interp_.eval_expression(*const_side, {});
    } catch (const Error&) {
      return;
    }
    // Normalize so the field reads as the left operand.
    if (!field_on_left) {
      switch (op) {
        case msl::BinOp::Lt: op = msl::BinOp::Gt; break;
        case msl::BinOp::Le: op = msl::BinOp::Ge; break;
        case msl::BinOp::Gt: op = msl::BinOp::Lt; break;
        case msl::BinOp::Ge: op = msl::BinOp::Le; break;
        default: break;
      }
    }

    CandidateSet& set = sets_[*field];

    if (is_request_field(*field_side)) {
      if (k.tag() == ValueTag::Int) {
        for (auto v : solve_int(op, k.as_int())) set.add(TypedValue(v));
        set.add(k);
      } else if (k.tag() == ValueTag::Float) {
        double base = k.as_float();
        set.add(TypedValue(base));
        set.add(TypedValue(base - 1.0));
        set.add(TypedValue(base + 1.0));
      } else if (k.tag() == ValueTag::Str) {
        if (op == msl::BinOp::Eq) set.add(k);
        else set.add(TypedValue(k.as_str() + "x"));
      } else if (k.tag() == ValueTag::Bool) {
        set.add(TypedValue(op == msl::BinOp::Eq ? k.as_bool() : !k.as_bool()));
      }
      return;
    }

    // parseInt(request.f)
    if (field_side->kind == msl::Expr::Kind::Call && field_side->name == "parseInt" &&
        field_side->args.size() == 1 && is_request_field(*field_side->args[0]) &&
        k.tag() == ValueTag::Int) {
      for (auto v : solve_int(op, k.as_int())) set.add(TypedValue(std::to_string(v)));
      return;
    }

    if (field_side->kind == msl::Expr::Kind::MethodCall) {
      const msl::Expr& m = *field_side;
      // request.f.length() cmp k
      if (m.name == "length" && is_request_field(*m.receiver) && k.tag() == ValueTag::Int) {
        for (auto v : solve_int(op, k.as_int()))
          if (v >= 0 && v < 4096) {
            set.shape.exact_lengths.push_back(v);
            set.add(TypedValue(std::string(static_cast<std::size_t>(v), 'a')));
          }
        return;
      }
      // request.f.substring(a, b) == "lit"
      if (m.name == "substring" && is_request_field(*m.receiver) && m.args.size() == 2 &&
          op == msl::BinOp::Eq && k.tag() == ValueTag::Str) {
        try {
          TypedValue a = interp_.eval_expression(*m.args[0], {});
          if (a.tag() == ValueTag::Int && a.as_int() >= 0 && a.as_int() < 4096) {
            set.shape.placements.emplace_back(a.as_int(), k.as_str());
            std::string s(static_cast<std::size_t>(a.as_int()), 'a');
            s += k.as_str();
            set.add(TypedValue(s));
            set.add(TypedValue(s + "a"));
          }
        } catch (const Error&) {
        }
        return;
      }
      // request.f.group(P, i) == "lit"
      if (m.name == "group" && is_request_field(*m.receiver) && m.args.size() == 2 &&
          k.tag() == ValueTag::Str && op == msl::BinOp::Eq) {
        add_group_witnesses(set, m, {k.as_str()});
        return;
      }
    }

    // parseInt(request.f.group(P, i)) cmp k
    if (field_side->kind == msl::Expr::Kind::Call && field_side->name == "parseInt" &&
        field_side->args.size() == 1 &&
        field_side->args[0]->kind == msl::Expr::Kind::MethodCall &&
        field_side->args[0]->name == "group" && k.tag() == ValueTag::Int) {
      const msl::Expr& m = *field_side->args[0];
      if (is_request_field(*m.receiver) && m.args.size() == 2) {
        std::vector<std::string> pins;
        for (auto v : solve_int(op, k.as_int()))
          if (v >= 0) pins.push_back(std::to_string(v));
        add_group_witnesses(set, m, pins);
      }
      return;
    }
  }

  void add_group_witnesses(CandidateSet& set, const msl::Expr& group_call,
                           const std::vector<std::string>& pinned) {
    auto pattern = literal_string(*group_call.args[0]);
    if (!pattern) {
      try {
        TypedValue p = interp_.eval_expression(*group_call.args[0], {});
        if (p.tag() == ValueTag::Str) pattern = p.as_str();
      } catch (const Error&) {
      }
    }
    if (!pattern) return;
    std::int64_t index = 1;
    try {
      TypedValue i = interp_.eval_expression(*group_call.args[1], {});
      if (i.tag() == ValueTag::Int) index = i.as_int();
    } catch (const Error&) {
    }
    for (const auto& pin : pinned) {
      auto w = regex_witness(*pattern, {{static_cast<int>(index), pin}});
      if (w) set.add(TypedValue(*w));
    }
  }

  void handle_string_predicate(const msl::Expr& e, bool want) {
    if (!is_request_field(*e.receiver) || e.args.size() != 1) {
      // A predicate over a transformed receiver still names a field; record
      // it so generic candidates run.
      auto field = sole_request_field(e);
      if (field) sets_[*field];
      return;
    }
    const std::string& field = e.receiver->name;
    CandidateSet& set = sets_[field];
    std::optional<std::string> lit = literal_string(*e.args[0]);
    if (!lit) {
      try {
        TypedValue v = interp_.eval_expression(*e.args[0], {});
        if (v.tag() == ValueTag::Str) lit = v.as_str();
      } catch (const Error&) {
      }
    }
    if (!lit) return;

    if (e.name == "matches") {
      if (want) {
        auto w = regex_witness(*lit);
        if (w) set.add(TypedValue(*w));
      } else {
        set.add(TypedValue("~#nope#~"));
      }
      return;
    }
    if (e.name == "startsWith") {
      if (want) {
        set.shape.prefix = *lit;
        set.add(TypedValue(*lit));
        set.add(TypedValue(*lit + "a"));
      } else {
        set.add(TypedValue("zz"));
      }
      return;
    }
    // contains
    if (want) {
      set.shape.substrings.push_back(*lit);
      set.add(TypedValue(*lit));
    } else {
      set.add(TypedValue("zz"));
    }
  }

  void compose_shape(const std::string& /*field*/, CandidateSet& set) {
    const StringShape& sh = set.shape;
    if (!sh.prefix && sh.substrings.empty() && sh.placements.empty()) return;

    std::vector<std::int64_t> lengths = sh.exact_lengths;
    if (lengths.empty()) lengths.push_back(-1);  // auto
    for (std::int64_t len : lengths) {
      std::string s = sh.prefix.value_or("");
      for (const auto& [offset, lit] : sh.placements) {
        std::size_t at = static_cast<std::size_t>(offset);
        if (s.size() < at) s.resize(at, 'a');
        if (s.size() < at + lit.size()) s.resize(at + lit.size(), 'a');
        s.replace(at, lit.size(), lit);
      }
      for (const auto& sub : sh.substrings)
        if (s.find(sub) == std::string::npos) s += sub;
      if (len >= 0) {
        if (static_cast<std::int64_t>(s.size()) > len) continue;  // cannot fit
        s.resize(static_cast<std::size_t>(len), 'a');
      }
      set.add(TypedValue(s));
    }
  }

  msl::Interpreter& interp_;
  const std::map<std::string, TypedValue>& currents_;
  std::map<std::string, CandidateSet> sets_;
};

// ---------------------------------------------------------------------------
// Action-field lookup: maps an MSL request-field name (bind name) to the
// wire location inside the serialized actions.

struct ActionField {
  int action_index = 0;
  ParamKind kind = ParamKind::Body;
  std::string wire_name;
  TypedValue current;
};

std::optional<ActionField> find_action_field(const std::vector<nlohmann::json>& actions,
                                             const std::string& msl_field) {
  const std::string norm = normalize_field_name(msl_field);
  const std::pair<const char*, ParamKind> kinds[] = {
      {"path", ParamKind::Path}, {"query", ParamKind::Query},
      {"header", ParamKind::Header}, {"body", ParamKind::Body}};
  // Exact match, then normalized equality, then normalized containment (so
  // an identifier-shaped binding like apiKey still finds the X-Api-Key wire
  // header).
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i < actions.size(); ++i) {
      for (const auto& [section, kind] : kinds) {
        if (!actions[i].contains(section) || !actions[i][section].is_object()) continue;
        for (auto it = actions[i][section].begin(); it != actions[i][section].end(); ++it) {
          std::string wire = normalize_field_name(it.key());
          bool hit = false;
          if (pass == 0) hit = it.key() == msl_field;
          else if (pass == 1) hit = wire == norm;
          else
            hit = norm.size() >= 3 && wire.size() >= 3 &&
                  (wire.find(norm) != std::string::npos || norm.find(wire) != std::string::npos);
          if (hit) {
            ActionField out;
            out.action_index = actions[i].contains("index") ? actions[i]["index"].get<int>()
                                                            : static_cast<int>(i);
            out.kind = kind;
            out.wire_name = it.key();
            out.current = TypedValue::from_json(it.value());
            return out;
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::string emit_hint(const ActionField& slot, const TypedValue& value) {
  MutationHint h;
  h.action_index = slot.action_index;
  h.param_kind = slot.kind;
  h.field_path = {slot.wire_name};
  h.new_value = value;
  return h.to_json().dump();
}

}  // namespace

std::string SolverOracleBackend::query(const Prompt& prompt) {
  auto ctx = parse_context(prompt.context);
  if (!ctx) return kRefusal;

  // Assemble the knowledge base the prompt carries: chain constants, called
  // function definitions, and the enclosing function.
  std::string source;
  std::set<std::string> have_functions;
  for (const auto& line : ctx->chain_lines)
    if (line.rfind("const ", 0) == 0) source += line + "\n";
  for (const std::string& blob : {ctx->called_defs, ctx->function_code}) {
    for (const auto& block : split_decl_blocks(blob)) {
      auto name = block_function_name(block);
      if (name) {
        if (have_functions.count(*name)) continue;
        have_functions.insert(*name);
        source += block;
      } else if (trim(block).rfind("const ", 0) == 0) {
        source += block;
      }
    }
  }

  msl::MslProgram program;
  try {
    program.add_unit(msl::parse_unit(source, "ctx"));
  } catch (const Error&) {
    return kRefusal;
  }

  // Locate the target statement inside the re-parsed enclosing function by
  // matching the LineCode text.
  const msl::Stmt* target_stmt = nullptr;
  const msl::FunctionDecl* target_fn = nullptr;
  const msl::Unit* unit = program.unit("ctx");
  for (int line = 1; line <= static_cast<int>(unit->source_lines.size()) && !target_stmt; ++line) {
    if (program.line_text("ctx", line) != ctx->line_code) continue;
    const msl::Stmt* s = program.statement_at("ctx", line);
    if (s) {
      target_stmt = s;
      target_fn = program.enclosing_function_of(*s);
    }
  }
  if (!target_stmt || !target_fn) return kRefusal;

  // Conjuncts: dominating path conditions, then the target condition.
  std::vector<std::pair<const msl::Expr*, bool>> path;
  collect_path_conditions(target_fn->body, target_stmt, path);

  std::vector<Conjunct> conjuncts;
  for (const auto& [cond, taken] : path) flatten_condition(*cond, taken, false, conjuncts);

  if (ctx->target.kind == TargetKind::Branch) {
    if (target_stmt->kind != msl::Stmt::Kind::If) return kRefusal;
    flatten_condition(*target_stmt->expr, ctx->target.expected == Expected::TrueSide, true,
                      conjuncts);
  } else {
    std::vector<const msl::Expr*> calls;
    if (target_stmt->expr) collect_mr_calls(*target_stmt->expr, calls);
    if (ctx->target.position < 0 || ctx->target.position >= static_cast<int>(calls.size()))
      return kRefusal;
    Conjunct c;
    c.expr = calls[static_cast<std::size_t>(ctx->target.position)];
    c.want = ctx->target.expected == Expected::ReturnsTrue;
    c.is_target = true;
    conjuncts.push_back(std::move(c));
  }

  // Definition environment: chain statements (bindings, lets, consts) plus
  // the enclosing function's own definitions.
  DefEnv env;
  std::vector<msl::StmtPtr> owned_chain_stmts;
  for (const auto& line : ctx->chain_lines) {
    try {
      msl::StmtPtr s = msl::parse_statement_text(line);
      if ((s->kind == msl::Stmt::Kind::Let || s->kind == msl::Stmt::Kind::Assign) && s->expr) {
        env[s->var_name].push_back(s->expr.get());
        owned_chain_stmts.push_back(std::move(s));
      }
    } catch (const Error&) {
      // Non-definition chain line; ignore.
    }
  }
  collect_local_defs(target_fn->body, env);

  // Substitute every conjunct down to request fields and literals.
  struct ResolvedConjunct {
    std::vector<msl::ExprPtr> variants;
    bool want;
    bool is_target;
  };
  std::vector<ResolvedConjunct> resolved;
  for (const auto& c : conjuncts) {
    Substituter sub{env, {}, false};
    ResolvedConjunct rc;
    rc.variants = sub.subst(c.e(), 0);
    rc.want = c.want;
    rc.is_target = c.is_target;
    resolved.push_back(std::move(rc));
  }

  // Current request values keyed by MSL field name.
  std::map<std::string, TypedValue> currents;
  std::set<std::string> all_fields;
  for (const auto& rc : resolved)
    for (const auto& v : rc.variants) {
      std::vector<std::string> fields;
      msl::collect_request_fields(*v, fields);
      for (const auto& f : fields) all_fields.insert(f);
    }
  std::map<std::string, ActionField> slots;
  for (const auto& f : all_fields) {
    auto slot = find_action_field(ctx->actions, f);
    if (slot) {
      slots.emplace(f, *slot);
      currents[f] = slot->current;
    }
  }

  msl::Interpreter interp(program, nullptr);
  auto conjunct_holds = [&](const ResolvedConjunct& rc,
                            const std::map<std::string, TypedValue>& env_values) {
    if (rc.variants.empty()) return false;
    for (const auto& v : rc.variants) {
      try {
        TypedValue r = interp.eval_expression(*v, env_values);
        if (r.tag() == ValueTag::Bool && r.as_bool() == rc.want) return true;
      } catch (const Error&) {
      }
    }
    return false;
  };
  auto all_hold = [&](const std::map<std::string, TypedValue>& env_values) {
    for (const auto& rc : resolved)
      if (!conjunct_holds(rc, env_values)) return false;
    return true;
  };

  // Candidates per field, from the constraints that mention it.
  CandidateBuilder builder(interp, currents);
  for (const auto& rc : resolved)
    for (const auto& v : rc.variants) builder.scan(*v, rc.want);
  builder.finalize();

  // Full solve: one field changed, everything else at current values.
  for (auto& [field, set] : builder.sets()) {
    auto slot = slots.find(field);
    if (slot == slots.end()) continue;
    for (const auto& candidate : set.values) {
      auto env_values = currents;
      env_values[field] = candidate;
      if (all_hold(env_values)) return emit_hint(slot->second, candidate);
    }
  }

  // Partial solve: repair the first conjunct that fails under the current
  // values (path conditions come first, so progress is archivable and the
  // next attempt starts closer).
  for (const auto& rc : resolved) {
    if (conjunct_holds(rc, currents)) continue;
    if (rc.variants.empty()) return kRefusal;  // unresolvable without more context
    for (auto& [field, set] : builder.sets()) {
      auto slot = slots.find(field);
      if (slot == slots.end()) continue;
      for (const auto& candidate : set.values) {
        auto env_values = currents;
        env_values[field] = candidate;
        if (conjunct_holds(rc, env_values)) return emit_hint(slot->second, candidate);
      }
    }
    return kRefusal;
  }
  return kRefusal;
}

}  // namespace miohint::llm
