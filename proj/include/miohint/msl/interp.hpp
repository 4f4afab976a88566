#pragma once

#include <map>
#include <regex>
#include <string>

#include "miohint/coverage.hpp"
#include "miohint/errors.hpp"
#include "miohint/msl/program.hpp"
#include "miohint/typed_value.hpp"

namespace miohint::msl {

class RuntimeError : public Error {
 public:
  RuntimeError(std::string msg, SourceLoc loc) : Error(std::move(msg)), loc(std::move(loc)) {}
  SourceLoc loc;
};

// Coverage accumulated since the last reset: covered targets, executed
// lines, and the best heuristic score seen per target (1 = covered, in
// (0,1) when the decision executed with the other outcome, 0 otherwise).
struct CoverageState {
  std::set<Target> covered;
  std::set<LineKey> lines;
  std::map<Target, double> scores;

  void reset() {
    covered.clear();
    lines.clear();
    scores.clear();
  }
  CoverageSnapshot snapshot() const { return CoverageSnapshot{covered, lines}; }
};

// Tree-walking evaluator for MSL. Probes fire at branch decisions and
// method-replacement builtin calls when a CoverageState is attached; with a
// null state the interpreter is a pure expression/function evaluator (used
// by the solver backend).
class Interpreter {
 public:
  explicit Interpreter(const MslProgram& program, CoverageState* coverage = nullptr)
      : program_(program), coverage_(coverage) {}

  // Runs a function with the given request bound; returns its return value
  // (Null when the function falls off the end). Throws RuntimeError.
  TypedValue call_function(const std::string& name,
                           const std::map<std::string, TypedValue>& request_env,
                           const std::vector<TypedValue>& args = {});

  // Evaluates a standalone expression against the request environment.
  // Variables resolve against program consts only; user-defined calls
  // dispatch into the program.
  TypedValue eval_expression(const Expr& e, const std::map<std::string, TypedValue>& request_env);

 private:
  struct Frame {
    std::map<std::string, TypedValue> locals;
  };
  enum class Flow { Normal, Returned };

  Flow exec_block(const std::vector<StmtPtr>& body, Frame& frame, TypedValue& ret);
  Flow exec_stmt(const Stmt& s, Frame& frame, TypedValue& ret);
  TypedValue eval(const Expr& e, Frame& frame);
  TypedValue eval_binary(const Expr& e, Frame& frame);
  TypedValue eval_method(const Expr& e, Frame& frame);
  TypedValue call_user(const std::string& name, std::vector<TypedValue> args, const SourceLoc& at);
  TypedValue const_value(const std::string& name, const SourceLoc& at);
  const std::regex& compiled(const std::string& pattern, const SourceLoc& at);

  void probe_branch(const Stmt& s, bool taken, double dist_true, double dist_false);
  void probe_mr(const Expr& call, bool outcome);
  void mark_line(const SourceLoc& loc);

  const MslProgram& program_;
  CoverageState* coverage_;
  const std::map<std::string, TypedValue>* request_ = nullptr;
  std::map<std::string, TypedValue> const_cache_;
  std::set<std::string> const_in_progress_;
  std::map<std::string, std::regex> regex_cache_;
  int depth_ = 0;
};

}  // namespace miohint::msl
