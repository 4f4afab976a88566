#include "miohint/msl/program.hpp"

#include <algorithm>

#include "miohint/errors.hpp"

namespace miohint::msl {

bool is_builtin_method(const std::string& name) {
  return name == "matches" || name == "contains" || name == "startsWith" ||
         name == "length" || name == "substring" || name == "group";
}

bool is_builtin_free(const std::string& name) { return name == "parseInt"; }

bool is_mr_builtin(const std::string& name) {
  return name == "matches" || name == "contains" || name == "startsWith";
}

void MslProgram::add_unit(Unit unit) {
  if (units_.count(unit.name)) throw Error("duplicate unit '" + unit.name + "'");
  auto [it, _] = units_.emplace(unit.name, std::move(unit));
  index_unit(it->second);
}

void MslProgram::index_unit(Unit& u) {
  std::map<int, int> branch_per_line, mr_per_line, stmt_per_line;
  for (auto& c : u.consts) {
    if (consts_.count(c.name)) throw Error("duplicate const '" + c.name + "'");
    consts_[c.name] = &c;
  }
  for (auto& f : u.functions) {
    if (functions_.count(f.name)) throw Error("duplicate function '" + f.name + "'");
    functions_[f.name] = &f;
    fn_order_.push_back(&f);
    for (auto& s : f.body) index_stmt(*s, u.name, &f, branch_per_line, mr_per_line, stmt_per_line);
  }
}

void MslProgram::index_stmt(Stmt& stmt, const std::string& unit_name, const FunctionDecl* fn,
                            std::map<int, int>& branch_per_line, std::map<int, int>& mr_per_line,
                            std::map<int, int>& stmt_per_line) {
  stmt.ordinal_in_line = stmt_per_line[stmt.loc.line]++;
  StatementRef ref{unit_name, stmt.loc.line, stmt.ordinal_in_line};
  stmts_[ref] = &stmt;
  refs_[&stmt] = ref;
  stmt_fn_[&stmt] = fn;

  if (stmt.kind == Stmt::Kind::If) stmt.branch_position = branch_per_line[stmt.loc.line]++;
  if (stmt.expr) index_expr(*stmt.expr, stmt, unit_name, fn, mr_per_line);
  for (auto& s : stmt.then_body) index_stmt(*s, unit_name, fn, branch_per_line, mr_per_line, stmt_per_line);
  for (auto& s : stmt.else_body) index_stmt(*s, unit_name, fn, branch_per_line, mr_per_line, stmt_per_line);
}

void MslProgram::index_expr(Expr& e, const Stmt& stmt, const std::string& unit_name,
                            const FunctionDecl* fn, std::map<int, int>& mr_per_line) {
  // Evaluation order: receiver, arguments, then the call itself.
  switch (e.kind) {
    case Expr::Kind::MethodCall:
      index_expr(*e.receiver, stmt, unit_name, fn, mr_per_line);
      for (auto& a : e.args) index_expr(*a, stmt, unit_name, fn, mr_per_line);
      if (is_mr_builtin(e.name)) e.mr_position = mr_per_line[e.loc.line]++;
      break;
    case Expr::Kind::Call: {
      for (auto& a : e.args) index_expr(*a, stmt, unit_name, fn, mr_per_line);
      if (!is_builtin_free(e.name)) {
        CallSite site;
        site.stmt = &stmt;
        site.call = &e;
        site.caller = fn;
        site.ref = refs_.at(&stmt);
        call_sites_[e.name].push_back(site);
      }
      break;
    }
    case Expr::Kind::Binary:
      index_expr(*e.lhs, stmt, unit_name, fn, mr_per_line);
      index_expr(*e.rhs, stmt, unit_name, fn, mr_per_line);
      break;
    case Expr::Kind::Unary:
      index_expr(*e.operand, stmt, unit_name, fn, mr_per_line);
      break;
    default:
      break;
  }
}

const Unit* MslProgram::unit(const std::string& name) const {
  auto it = units_.find(name);
  return it == units_.end() ? nullptr : &it->second;
}

std::vector<std::string> MslProgram::unit_names() const {
  std::vector<std::string> names;
  for (const auto& [n, _] : units_) names.push_back(n);
  return names;
}

const FunctionDecl* MslProgram::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : it->second;
}

std::vector<const FunctionDecl*> MslProgram::functions_in_source_order() const { return fn_order_; }

const ConstDecl* MslProgram::const_decl(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : it->second;
}

const ConstDecl* MslProgram::const_at(const std::string& unit_name, int line) const {
  const Unit* u = unit(unit_name);
  if (!u) return nullptr;
  for (const auto& c : u->consts)
    if (c.loc.line == line) return &c;
  return nullptr;
}

const Stmt* MslProgram::resolve(const StatementRef& ref) const {
  auto it = stmts_.find(ref);
  return it == stmts_.end() ? nullptr : it->second;
}

const Stmt* MslProgram::statement_at(const std::string& unit, int line) const {
  return resolve(StatementRef{unit, line, 0});
}

StatementRef MslProgram::ref_of(const Stmt& stmt) const { return refs_.at(&stmt); }

std::string MslProgram::line_text(const std::string& unit_name, int line) const {
  const Unit* u = unit(unit_name);
  if (!u || line < 1 || line > static_cast<int>(u->source_lines.size())) return "";
  std::string text = u->source_lines[static_cast<std::size_t>(line - 1)];
  auto begin = text.find_first_not_of(" \t");
  auto end = text.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return text.substr(begin, end - begin + 1);
}

std::string MslProgram::statement_text(const Stmt& stmt) const {
  return line_text(stmt.loc.unit, stmt.loc.line);
}

const FunctionDecl* MslProgram::enclosing_function(const StatementRef& ref) const {
  const Stmt* s = resolve(ref);
  if (!s) return nullptr;
  return enclosing_function_of(*s);
}

const FunctionDecl* MslProgram::enclosing_function_of(const Stmt& stmt) const {
  auto it = stmt_fn_.find(&stmt);
  return it == stmt_fn_.end() ? nullptr : it->second;
}

std::vector<CallSite> MslProgram::call_sites(const std::string& callee) const {
  auto it = call_sites_.find(callee);
  return it == call_sites_.end() ? std::vector<CallSite>{} : it->second;
}

namespace {

void enumerate_in_expr(const Expr& e, const std::string& unit, std::vector<Target>& out) {
  switch (e.kind) {
    case Expr::Kind::MethodCall:
      enumerate_in_expr(*e.receiver, unit, out);
      for (const auto& a : e.args) enumerate_in_expr(*a, unit, out);
      if (e.mr_position >= 0) {
        out.push_back(Target{TargetKind::MethodReplacement, unit, e.loc.line, e.mr_position,
                             Expected::ReturnsTrue});
        out.push_back(Target{TargetKind::MethodReplacement, unit, e.loc.line, e.mr_position,
                             Expected::ReturnsFalse});
      }
      break;
    case Expr::Kind::Call:
      for (const auto& a : e.args) enumerate_in_expr(*a, unit, out);
      break;
    case Expr::Kind::Binary:
      enumerate_in_expr(*e.lhs, unit, out);
      enumerate_in_expr(*e.rhs, unit, out);
      break;
    case Expr::Kind::Unary:
      enumerate_in_expr(*e.operand, unit, out);
      break;
    default:
      break;
  }
}

void enumerate_in_stmt(const Stmt& s, const std::string& unit, std::vector<Target>& out) {
  if (s.expr) enumerate_in_expr(*s.expr, unit, out);
  if (s.kind == Stmt::Kind::If) {
    out.push_back(Target{TargetKind::Branch, unit, s.loc.line, s.branch_position, Expected::TrueSide});
    out.push_back(Target{TargetKind::Branch, unit, s.loc.line, s.branch_position, Expected::FalseSide});
  }
  for (const auto& c : s.then_body) enumerate_in_stmt(*c, unit, out);
  for (const auto& c : s.else_body) enumerate_in_stmt(*c, unit, out);
}

void lines_in_stmt(const Stmt& s, const std::string& unit, std::set<LineKey>& out) {
  out.insert({unit, s.loc.line});
  for (const auto& c : s.then_body) lines_in_stmt(*c, unit, out);
  for (const auto& c : s.else_body) lines_in_stmt(*c, unit, out);
}

}  // namespace

std::vector<Target> MslProgram::enumerate_targets() const {
  std::vector<Target> out;
  for (const auto& [name, u] : units_) {
    for (const auto& f : u.functions)
      for (const auto& s : f.body) enumerate_in_stmt(*s, name, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<LineKey> MslProgram::executable_lines() const {
  std::set<LineKey> out;
  for (const auto& [name, u] : units_) {
    for (const auto& f : u.functions)
      for (const auto& s : f.body) lines_in_stmt(*s, name, out);
  }
  return out;
}

}  // namespace miohint::msl
