#include "miohint/extraction.hpp"

#include <algorithm>
#include <set>

#include "miohint/errors.hpp"

namespace miohint {

using msl::CallSite;
using msl::Expr;
using msl::FunctionDecl;
using msl::MslProgram;
using msl::StatementRef;
using msl::Stmt;

bool DefUseChain::contains(const StatementRef& ref, const std::string& text) const {
  for (const auto& e : entries)
    if (e.ref == ref && e.text == text) return true;
  return false;
}

const FunctionDecl* find_enclosing_function(const MslProgram& program, const StatementRef& ref) {
  const Stmt* s = program.resolve(ref);
  if (!s) {
    if (program.const_at(ref.unit, ref.line))
      throw NotInFunction("statement at " + ref.unit + ":" + std::to_string(ref.line) +
                          " is a top-level constant");
    throw TargetLineNotFound("no statement at " + ref.unit + ":" + std::to_string(ref.line));
  }
  const FunctionDecl* fn = program.enclosing_function_of(*s);
  if (!fn)
    throw NotInFunction("statement at " + ref.unit + ":" + std::to_string(ref.line) +
                        " is outside any function");
  return fn;
}

namespace {

// Rendering of an expression for synthetic binding entries ("formal = actual").
std::string expr_text(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return std::to_string(e.int_val);
    case Expr::Kind::FloatLit: {
      std::string s = std::to_string(e.float_val);
      return s;
    }
    case Expr::Kind::StrLit: return "\"" + e.str_val + "\"";
    case Expr::Kind::BoolLit: return e.bool_val ? "true" : "false";
    case Expr::Kind::NullLit: return "null";
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::RequestField: return "request." + e.name;
    case Expr::Kind::Call: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += expr_text(*e.args[i]);
      }
      return s + ")";
    }
    case Expr::Kind::MethodCall: {
      std::string s = expr_text(*e.receiver) + "." + e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += expr_text(*e.args[i]);
      }
      return s + ")";
    }
    case Expr::Kind::Binary:
      return expr_text(*e.lhs) + " " + msl::to_string(e.bin_op) + " " + expr_text(*e.rhs);
    case Expr::Kind::Unary:
      return (e.un_op == msl::UnOp::Not ? "!" : "-") + expr_text(*e.operand);
  }
  return "";
}

// Variables used by a statement: the RHS/condition/return expression. The
// defined variable itself is not a use.
std::vector<std::string> statement_variables(const Stmt& s) {
  std::vector<std::string> vars;
  if (s.expr) msl::collect_variables(*s.expr, vars);
  return vars;
}

class ChainBuilder {
 public:
  ChainBuilder(const MslProgram& program, const DefUseOptions& options)
      : program_(program), options_(options) {}

  DefUseChain run(const Stmt& target) {
    const FunctionDecl* fn = program_.enclosing_function_of(target);
    // Part 1: parameter bindings up the caller chain of the enclosing function.
    visited_callers_.insert(fn);
    analyze_callers(*fn, 0);
    // Part 2: definitions of the variables used at the target statement.
    for (const auto& v : statement_variables(target)) analyze_variable(v, *fn);
    return std::move(chain_);
  }

 private:
  void add_entry(const StatementRef& ref, std::string text, bool synthetic) {
    if (full()) return;
    if (chain_.contains(ref, text)) return;
    chain_.entries.push_back(ChainEntry{ref, std::move(text), synthetic});
  }

  bool full() {
    if (static_cast<int>(chain_.entries.size()) >= options_.chain_size_cap) {
      chain_.truncated = true;
      return true;
    }
    return false;
  }

  void analyze_callers(const FunctionDecl& fn, int depth) {
    if (depth >= options_.caller_depth_cap) {
      chain_.truncated = true;
      return;
    }
    for (const CallSite& site : program_.call_sites(fn.name)) {
      if (full()) return;
      std::size_t nargs = std::min(site.call->args.size(), fn.params.size());
      for (std::size_t i = 0; i < nargs; ++i) {
        const Expr& actual = *site.call->args[i];
        add_entry(site.ref, fn.params[i].name + " = " + expr_text(actual), true);
        std::vector<std::string> vars;
        msl::collect_variables(actual, vars);
        for (const auto& v : vars) analyze_variable(v, *site.caller);
      }
      if (!visited_callers_.count(site.caller)) {
        visited_callers_.insert(site.caller);
        analyze_callers(*site.caller, depth + 1);
      }
    }
  }

  void analyze_variable(const std::string& name, const FunctionDecl& scope) {
    if (full()) return;
    // Local definitions: every assignment or declaration of the variable in
    // the scope function (flow-insensitive; all reaching definitions kept).
    std::vector<const Stmt*> defs;
    collect_defs(scope.body, name, defs);
    if (!defs.empty()) {
      for (const Stmt* d : defs) {
        StatementRef ref = program_.ref_of(*d);
        std::string text = program_.statement_text(*d);
        if (chain_.contains(ref, text)) continue;
        add_entry(ref, text, false);
        for (const auto& v : statement_variables(*d)) analyze_variable(v, scope);
      }
      return;
    }
    // Parameters are defined by the call-site bindings handled above.
    for (const auto& p : scope.params)
      if (p.name == name) return;
    // Unit-level constant.
    if (const msl::ConstDecl* c = program_.const_decl(name)) {
      StatementRef ref{c->loc.unit, c->loc.line, 0};
      std::string text = program_.line_text(c->loc.unit, c->loc.line);
      if (chain_.contains(ref, text)) return;
      add_entry(ref, text, false);
      if (c->init) {
        std::vector<std::string> vars;
        msl::collect_variables(*c->init, vars);
        for (const auto& v : vars) analyze_variable(v, scope);
      }
      return;
    }
    if (std::find(chain_.unresolved.begin(), chain_.unresolved.end(), name) ==
        chain_.unresolved.end())
      chain_.unresolved.push_back(name);
  }

  static void collect_defs(const std::vector<msl::StmtPtr>& body, const std::string& name,
                           std::vector<const Stmt*>& out) {
    for (const auto& s : body) {
      if ((s->kind == Stmt::Kind::Let || s->kind == Stmt::Kind::Assign) && s->var_name == name)
        out.push_back(s.get());
      collect_defs(s->then_body, name, out);
      collect_defs(s->else_body, name, out);
    }
  }

  const MslProgram& program_;
  const DefUseOptions& options_;
  DefUseChain chain_;
  std::set<const FunctionDecl*> visited_callers_;
};

}  // namespace

DefUseChain def_use_chain(const MslProgram& program, const StatementRef& ref,
                          const DefUseOptions& options) {
  const Stmt* target = program.resolve(ref);
  if (!target)
    throw TargetLineNotFound("no statement at " + ref.unit + ":" + std::to_string(ref.line));
  find_enclosing_function(program, ref);  // NotInFunction propagates
  ChainBuilder builder(program, options);
  return builder.run(*target);
}

std::vector<std::string> called_function_definitions(const MslProgram& program,
                                                     const StatementRef& ref) {
  const Stmt* target = program.resolve(ref);
  if (!target)
    throw TargetLineNotFound("no statement at " + ref.unit + ":" + std::to_string(ref.line));
  std::vector<std::string> callees;
  if (target->expr) msl::collect_callees(*target->expr, callees);

  std::vector<const FunctionDecl*> decls;
  for (const auto& name : callees) {
    if (msl::is_builtin_free(name) || msl::is_builtin_method(name)) continue;
    const FunctionDecl* fn = program.function(name);
    if (!fn) continue;  // unknown callee: skipped
    if (std::find(decls.begin(), decls.end(), fn) == decls.end()) decls.push_back(fn);
  }
  // Definition (source) order.
  std::vector<const FunctionDecl*> ordered;
  for (const FunctionDecl* fn : program.functions_in_source_order())
    if (std::find(decls.begin(), decls.end(), fn) != decls.end()) ordered.push_back(fn);

  std::vector<std::string> out;
  for (const FunctionDecl* fn : ordered) out.push_back(fn->source_text);
  return out;
}

RelatedCode extract_related_code(const MslProgram& program, const Target& target,
                                 const DefUseOptions& options) {
  StatementRef ref{target.class_name, target.line, 0};
  const Stmt* stmt = program.resolve(ref);
  if (!stmt)
    throw TargetLineNotFound("target line " + target.class_name + ":" +
                             std::to_string(target.line) + " resolves to no statement");
  RelatedCode rc;
  rc.target = target;
  rc.target_line_text = program.line_text(target.class_name, target.line);
  rc.enclosing_function_text = find_enclosing_function(program, ref)->source_text;
  rc.def_use_chain = def_use_chain(program, ref, options);
  rc.called_function_defs = called_function_definitions(program, ref);
  return rc;
}

std::string RelatedCode::to_text() const {
  std::string out;
  out += "Target: " + render_target_id(target) + "\n";
  out += "LineCode: " + target_line_text + "\n";
  out += "DefUseChain:\n";
  if (def_use_chain.entries.empty()) {
    out += "  (empty)\n";
  } else {
    for (const auto& e : def_use_chain.entries) out += "  " + e.text + "\n";
  }
  out += "CalledFunctionDefinition:\n";
  if (called_function_defs.empty()) {
    out += "  (none)\n";
  } else {
    for (const auto& f : called_function_defs) {
      out += f;
      if (!f.empty() && f.back() != '\n') out += "\n";
    }
  }
  out += "FunctionCode:\n";
  out += enclosing_function_text;
  if (!enclosing_function_text.empty() && enclosing_function_text.back() != '\n') out += "\n";
  return out;
}

}  // namespace miohint
