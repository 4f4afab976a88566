// Brute-force oracle for the def-use analysis: builds an explicit, global
// data-flow graph over a parsed program up front and answers with plain
// reachability. Kept independent of the recursive on-demand walk it checks.
//
// Also hosts the random MSL program generator the equivalence tests sample
// from.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "miohint/extraction.hpp"
#include "miohint/msl/parser.hpp"
#include "miohint/msl/program.hpp"
#include "miohint/util/rng.hpp"

namespace miohint::testsupport {

struct OracleResult {
  std::set<std::pair<std::string, std::string>> facts;  // (rendered ref, text)
  std::set<std::string> unresolved;
};

inline std::string render_ref(const msl::StatementRef& r) {
  return r.unit + ":" + std::to_string(r.line) + ":" + std::to_string(r.ordinal);
}

namespace oracle_detail {

struct Fact {
  msl::StatementRef ref;
  std::string text;
  // Outgoing edges discovered at build time.
  std::vector<int> edges;
};

struct Graph {
  const msl::MslProgram& program;
  std::vector<Fact> facts;
  std::map<std::pair<std::string, std::string>, int> fact_index;  // (key kind+id, text) -> node
  std::set<std::string> unresolved;

  explicit Graph(const msl::MslProgram& p) : program(p) {}

  int intern(const msl::StatementRef& ref, const std::string& text) {
    auto key = std::make_pair(render_ref(ref), text);
    auto it = fact_index.find(key);
    if (it != fact_index.end()) return it->second;
    facts.push_back(Fact{ref, text, {}});
    fact_index[key] = static_cast<int>(facts.size()) - 1;
    return static_cast<int>(facts.size()) - 1;
  }

  static void local_defs_of(const std::vector<msl::StmtPtr>& body, const std::string& var,
                            std::vector<const msl::Stmt*>& out) {
    for (const auto& s : body) {
      if ((s->kind == msl::Stmt::Kind::Let || s->kind == msl::Stmt::Kind::Assign) &&
          s->var_name == var)
        out.push_back(s.get());
      local_defs_of(s->then_body, var, out);
      local_defs_of(s->else_body, var, out);
    }
  }

  // Nodes for all definitions of `var` in scope `fn`, following the same
  // rules the analysis specifies: locals first, then parameters (no node;
  // handled by the caller phase), then unit constants, else unresolved.
  std::vector<int> def_nodes(const std::string& var, const msl::FunctionDecl& fn) {
    std::vector<int> out;
    std::vector<const msl::Stmt*> defs;
    local_defs_of(fn.body, var, defs);
    if (!defs.empty()) {
      for (const auto* d : defs) out.push_back(node_for_stmt(*d, fn));
      return out;
    }
    for (const auto& p : fn.params)
      if (p.name == var) return out;
    if (const msl::ConstDecl* c = program.const_decl(var)) {
      out.push_back(node_for_const(*c));
      return out;
    }
    unresolved.insert(var);
    return out;
  }

  int node_for_stmt(const msl::Stmt& s, const msl::FunctionDecl& fn) {
    msl::StatementRef ref = program.ref_of(s);
    std::string text = program.statement_text(s);
    auto key = std::make_pair(render_ref(ref), text);
    auto it = fact_index.find(key);
    if (it != fact_index.end()) return it->second;
    int node = intern(ref, text);
    std::vector<std::string> vars;
    if (s.expr) msl::collect_variables(*s.expr, vars);
    for (const auto& v : vars)
      for (int child : def_nodes(v, fn)) facts[static_cast<std::size_t>(node)].edges.push_back(child);
    return node;
  }

  int node_for_const(const msl::ConstDecl& c) {
    msl::StatementRef ref{c.loc.unit, c.loc.line, 0};
    std::string text = program.line_text(c.loc.unit, c.loc.line);
    auto key = std::make_pair(render_ref(ref), text);
    auto it = fact_index.find(key);
    if (it != fact_index.end()) return it->second;
    int node = intern(ref, text);
    std::vector<std::string> vars;
    if (c.init) msl::collect_variables(*c.init, vars);
    for (const auto& v : vars) {
      if (const msl::ConstDecl* other = program.const_decl(v))
        facts[static_cast<std::size_t>(node)].edges.push_back(node_for_const(*other));
      else
        unresolved.insert(v);
    }
    return node;
  }
};

// Expression rendering matching the analysis's synthetic-binding texts.
inline std::string expr_text(const msl::Expr& e) {
  using K = msl::Expr::Kind;
  switch (e.kind) {
    case K::IntLit: return std::to_string(e.int_val);
    case K::FloatLit: return std::to_string(e.float_val);
    case K::StrLit: return "\"" + e.str_val + "\"";
    case K::BoolLit: return e.bool_val ? "true" : "false";
    case K::NullLit: return "null";
    case K::Var: return e.name;
    case K::RequestField: return "request." + e.name;
    case K::Call: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + expr_text(*e.args[i]);
      return s + ")";
    }
    case K::MethodCall: {
      std::string s = expr_text(*e.receiver) + "." + e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + expr_text(*e.args[i]);
      return s + ")";
    }
    case K::Binary:
      return expr_text(*e.lhs) + " " + msl::to_string(e.bin_op) + " " + expr_text(*e.rhs);
    case K::Unary:
      return (e.un_op == msl::UnOp::Not ? "!" : "-") + expr_text(*e.operand);
  }
  return "";
}

}  // namespace oracle_detail

// Reference answer: backward-reachable definition facts for the target
// statement, mirroring the two analysis phases over an explicit graph.
inline OracleResult defuse_oracle(const msl::MslProgram& program, const msl::StatementRef& target) {
  using namespace oracle_detail;
  Graph graph(program);
  const msl::Stmt* target_stmt = program.resolve(target);
  const msl::FunctionDecl* target_fn = program.enclosing_function(target);

  std::vector<int> seeds;

  // Caller phase: the transitive caller set of the enclosing function, with
  // binding facts for every formal at every call site of a visited function.
  std::set<const msl::FunctionDecl*> visited{target_fn};
  std::vector<const msl::FunctionDecl*> frontier{target_fn};
  while (!frontier.empty()) {
    const msl::FunctionDecl* fn = frontier.back();
    frontier.pop_back();
    for (const auto& site : program.call_sites(fn->name)) {
      std::size_t nargs = std::min(site.call->args.size(), fn->params.size());
      for (std::size_t i = 0; i < nargs; ++i) {
        const msl::Expr& actual = *site.call->args[i];
        int node = graph.intern(site.ref, fn->params[i].name + " = " + expr_text(actual));
        seeds.push_back(node);
        std::vector<std::string> vars;
        msl::collect_variables(actual, vars);
        for (const auto& v : vars)
          for (int child : graph.def_nodes(v, *site.caller))
            graph.facts[static_cast<std::size_t>(node)].edges.push_back(child);
      }
      if (!visited.count(site.caller)) {
        visited.insert(site.caller);
        frontier.push_back(site.caller);
      }
    }
  }

  // Variable phase: definitions of the variables used at the target.
  std::vector<std::string> vars;
  if (target_stmt->expr) msl::collect_variables(*target_stmt->expr, vars);
  for (const auto& v : vars)
    for (int node : graph.def_nodes(v, *target_fn)) seeds.push_back(node);

  // Plain reachability.
  std::set<int> reached;
  std::vector<int> stack = seeds;
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    if (!reached.insert(node).second) continue;
    for (int next : graph.facts[static_cast<std::size_t>(node)].edges) stack.push_back(next);
  }

  OracleResult out;
  for (int node : reached) {
    const auto& fact = graph.facts[static_cast<std::size_t>(node)];
    out.facts.insert({render_ref(fact.ref), fact.text});
  }
  out.unresolved = graph.unresolved;
  return out;
}

inline OracleResult chain_as_set(const DefUseChain& chain) {
  OracleResult out;
  for (const auto& e : chain.entries) out.facts.insert({render_ref(e.ref), e.text});
  out.unresolved.insert(chain.unresolved.begin(), chain.unresolved.end());
  return out;
}

// ---------------------------------------------------------------------------
// Random program generator: <= 4 functions, <= ~50 statements, caller chains
// <= 3, constants, nested ifs, cross-function calls, request fields, and the
// occasional deliberately-undefined variable.

class ProgramGenerator {
 public:
  explicit ProgramGenerator(Rng& rng) : rng_(rng) {}

  std::string generate() {
    lines_.clear();
    n_consts_ = static_cast<int>(rand_below(rng_, 4));
    n_funcs_ = 1 + static_cast<int>(rand_below(rng_, 4));
    statements_left_ = 50;

    for (int i = 0; i < n_consts_; ++i) {
      std::string init;
      if (i > 0 && chance(3)) init = const_name(static_cast<int>(rand_below(rng_, i)));
      else if (chance(2)) init = "\"s" + std::to_string(rand_below(rng_, 100)) + "\"";
      else init = std::to_string(rand_below(rng_, 100));
      lines_.push_back("const " + const_name(i) + " = " + init);
    }

    // f0 may call f1..; deeper functions call deeper ones only, so caller
    // chains stay acyclic and short.
    for (int f = n_funcs_ - 1; f >= 0; --f) emit_function(f);
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
  }

 private:
  bool chance(int one_in) { return rand_below(rng_, static_cast<std::uint64_t>(one_in)) == 0; }
  std::string const_name(int i) { return "C" + std::to_string(i); }
  std::string fn_name(int i) { return "f" + std::to_string(i); }

  void emit_function(int f) {
    int params = f == 0 ? 0 : static_cast<int>(rand_below(rng_, 3));
    params_[f] = params;
    std::string header = "fun " + fn_name(f) + "(";
    for (int p = 0; p < params; ++p) {
      if (p) header += ", ";
      header += "p" + std::to_string(p) + ": int";
    }
    header += "): int {";
    lines_.push_back(header);
    int locals = 0;
    emit_block(f, 2 + static_cast<int>(rand_below(rng_, 5)), 1, locals);
    lines_.push_back("  return 0");
    lines_.push_back("}");
  }

  void emit_block(int f, int count, int depth, int& locals) {
    for (int i = 0; i < count && statements_left_ > 0; ++i) {
      --statements_left_;
      if (depth < 3 && chance(5)) {
        lines_.push_back(indent(depth) + "if (" + expr(f, locals, 0) + " < " +
                         std::to_string(rand_below(rng_, 50)) + ") {");
        int inner = 1 + static_cast<int>(rand_below(rng_, 2));
        emit_block(f, inner, depth + 1, locals);
        lines_.push_back(indent(depth) + "}");
        continue;
      }
      // Re-definitions of an existing local keep the multi-definition case
      // in play.
      int var = (locals > 0 && chance(4)) ? static_cast<int>(rand_below(rng_, locals)) : locals++;
      lines_.push_back(indent(depth) + "let v" + std::to_string(var) + " = " + expr(f, locals, 0));
    }
  }

  std::string expr(int f, int locals, int depth) {
    int roll = static_cast<int>(rand_below(rng_, 10));
    if (depth >= 2) roll = roll % 4;  // leaves only
    switch (roll) {
      case 0:
        return std::to_string(rand_below(rng_, 100));
      case 1: {
        static const char* fields[] = {"alpha", "beta", "gamma"};
        return std::string("request.") + fields[rand_below(rng_, 3)];
      }
      case 2: {
        // Possibly-undefined names exercise the unresolved path.
        if (chance(8)) return "u" + std::to_string(rand_below(rng_, 2));
        if (locals > 0) return "v" + std::to_string(rand_below(rng_, static_cast<std::uint64_t>(locals)));
        return std::to_string(rand_below(rng_, 100));
      }
      case 3: {
        if (params_[f] > 0 && chance(2))
          return "p" + std::to_string(rand_below(rng_, static_cast<std::uint64_t>(params_[f])));
        if (n_consts_ > 0) return const_name(static_cast<int>(rand_below(rng_, n_consts_)));
        return std::to_string(rand_below(rng_, 100));
      }
      case 4:
      case 5:
        return expr(f, locals, depth + 1) + (chance(2) ? " + " : " * ") + expr(f, locals, depth + 1);
      default: {
        // Call into a deeper function when one exists.
        if (f + 1 < n_funcs_ && chance(2)) {
          int callee = f + 1 + static_cast<int>(rand_below(rng_, n_funcs_ - f - 1));
          std::string call = fn_name(callee) + "(";
          for (int a = 0; a < params_[callee]; ++a) {
            if (a) call += ", ";
            call += expr(f, locals, depth + 1);
          }
          return call + ")";
        }
        return expr(f, locals, depth + 1) + " + " + std::to_string(rand_below(rng_, 10));
      }
    }
  }

  static std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

  Rng& rng_;
  std::vector<std::string> lines_;
  int n_consts_ = 0;
  int n_funcs_ = 0;
  int statements_left_ = 50;
  std::map<int, int> params_;
};

// All statement refs in the program, in a stable order.
inline std::vector<msl::StatementRef> all_statement_refs(const msl::MslProgram& program) {
  std::vector<msl::StatementRef> out;
  struct Walk {
    const msl::MslProgram& p;
    std::vector<msl::StatementRef>& out;
    void visit(const std::vector<msl::StmtPtr>& body) {
      for (const auto& s : body) {
        out.push_back(p.ref_of(*s));
        visit(s->then_body);
        visit(s->else_body);
      }
    }
  } walk{program, out};
  for (const auto* fn : program.functions_in_source_order()) walk.visit(fn->body);
  return out;
}

}  // namespace miohint::testsupport
