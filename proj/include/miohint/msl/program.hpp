#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "miohint/coverage.hpp"
#include "miohint/msl/ast.hpp"
#include "miohint/target.hpp"

namespace miohint::msl {

// Names usable as string methods, plus the `parseInt` free function. Any
// other free call is treated as user-defined.
bool is_builtin_method(const std::string& name);
bool is_builtin_free(const std::string& name);
// Boolean builtins designated as method-replacement targets.
bool is_mr_builtin(const std::string& name);

struct StatementRef {
  std::string unit;
  int line = 0;
  int ordinal = 0;  // statement ordinal within the line

  friend bool operator==(const StatementRef& a, const StatementRef& b) {
    return a.unit == b.unit && a.line == b.line && a.ordinal == b.ordinal;
  }
  friend bool operator<(const StatementRef& a, const StatementRef& b) {
    if (a.unit != b.unit) return a.unit < b.unit;
    if (a.line != b.line) return a.line < b.line;
    return a.ordinal < b.ordinal;
  }
};

struct CallSite {
  const Stmt* stmt = nullptr;        // statement containing the call
  const Expr* call = nullptr;        // the Call expression
  const FunctionDecl* caller = nullptr;
  StatementRef ref;
};

// An immutable collection of parsed units with the cross-unit indexes the
// analyses need: statement lookup by location, call sites by callee, and
// decision-point numbering (branch/method-replacement positions per line).
class MslProgram {
 public:
  MslProgram() = default;
  MslProgram(const MslProgram&) = delete;
  MslProgram& operator=(const MslProgram&) = delete;
  MslProgram(MslProgram&&) = default;
  MslProgram& operator=(MslProgram&&) = default;

  // Takes ownership of a parsed unit, assigns decision positions and
  // statement ordinals, and indexes it. Duplicate unit or function names
  // across units are rejected.
  void add_unit(Unit unit);

  const Unit* unit(const std::string& name) const;
  std::vector<std::string> unit_names() const;

  const FunctionDecl* function(const std::string& name) const;
  std::vector<const FunctionDecl*> functions_in_source_order() const;

  const ConstDecl* const_decl(const std::string& name) const;
  // Const declaration occupying the given line, if any.
  const ConstDecl* const_at(const std::string& unit, int line) const;

  const Stmt* resolve(const StatementRef& ref) const;
  // First statement on the line, if any.
  const Stmt* statement_at(const std::string& unit, int line) const;
  StatementRef ref_of(const Stmt& stmt) const;

  // Trimmed verbatim source line.
  std::string line_text(const std::string& unit, int line) const;
  std::string statement_text(const Stmt& stmt) const;

  // Innermost function whose body span contains the statement; null for
  // locations outside any function.
  const FunctionDecl* enclosing_function(const StatementRef& ref) const;
  const FunctionDecl* enclosing_function_of(const Stmt& stmt) const;

  std::vector<CallSite> call_sites(const std::string& callee) const;

  // Two targets per branch decision and per method-replacement call, sorted
  // by (class_name, line, position, expected).
  std::vector<Target> enumerate_targets() const;

  // Distinct lines holding statements; the line-coverage denominator.
  std::set<LineKey> executable_lines() const;

 private:
  void index_unit(Unit& u);
  void index_stmt(Stmt& stmt, const std::string& unit_name, const FunctionDecl* fn,
                  std::map<int, int>& branch_per_line, std::map<int, int>& mr_per_line,
                  std::map<int, int>& stmt_per_line);
  void index_expr(Expr& e, const Stmt& stmt, const std::string& unit_name, const FunctionDecl* fn,
                  std::map<int, int>& mr_per_line);

  std::map<std::string, Unit> units_;
  std::map<std::string, const FunctionDecl*> functions_;
  std::map<std::string, const ConstDecl*> consts_;
  std::map<StatementRef, const Stmt*> stmts_;
  std::map<const Stmt*, StatementRef> refs_;
  std::map<const Stmt*, const FunctionDecl*> stmt_fn_;
  std::map<std::string, std::vector<CallSite>> call_sites_;
  std::vector<const FunctionDecl*> fn_order_;
};

}  // namespace miohint::msl
