#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace miohint::msl {

struct SourceLoc {
  std::string unit;
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

bool is_comparison(BinOp op);
const char* to_string(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    IntLit, FloatLit, StrLit, BoolLit, NullLit,
    Var,           // name
    RequestField,  // request.<name>
    Call,          // name(args) — user function or free builtin
    MethodCall,    // receiver.name(args) — string builtins
    Binary, Unary
  };

  Kind kind = Kind::NullLit;
  SourceLoc loc;

  std::int64_t int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string str_val;
  std::string name;

  std::vector<ExprPtr> args;
  ExprPtr receiver;
  ExprPtr lhs, rhs;
  ExprPtr operand;
  BinOp bin_op = BinOp::Add;
  UnOp un_op = UnOp::Neg;

  // Ordinal of this call among method-replacement builtin calls on its line;
  // assigned when the unit is indexed into a program.
  int mr_position = -1;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind { Let, Assign, If, Return, ExprStmt };

  Kind kind = Kind::ExprStmt;
  SourceLoc loc;
  int ordinal_in_line = 0;  // assigned at indexing time

  std::string var_name;  // Let/Assign
  ExprPtr expr;          // initializer / condition / return value / expression
  std::vector<StmtPtr> then_body;
  std::vector<StmtPtr> else_body;
  int branch_position = -1;  // If: ordinal of this decision within its line
  int end_line = 0;
};

struct Param {
  std::string name;
  std::string type;  // int | float | str | bool
};

struct FunctionDecl {
  std::string name;
  std::vector<Param> params;
  std::string return_type;  // empty when unspecified
  std::vector<StmtPtr> body;
  std::string doc;  // verbatim "///" lines, newline-separated; empty if none
  SourceLoc loc;    // line of the `fun` keyword
  int body_end_line = 0;
  std::string source_text;  // verbatim slice including the doc comment
};

struct ConstDecl {
  std::string name;
  ExprPtr init;
  std::string doc;
  SourceLoc loc;
  std::string source_text;
};

struct Unit {
  std::string name;
  std::vector<ConstDecl> consts;
  std::vector<FunctionDecl> functions;
  std::vector<std::string> source_lines;
};

// Variable references in evaluation order (receivers before arguments,
// left operands before right). Request-field accesses and literals are not
// variables and are skipped.
void collect_variables(const Expr& e, std::vector<std::string>& out);

// Free-call callee names in evaluation order (builtins included; callers
// filter against the builtin allowlist).
void collect_callees(const Expr& e, std::vector<std::string>& out);

// Request fields referenced by the expression, in evaluation order.
void collect_request_fields(const Expr& e, std::vector<std::string>& out);

ExprPtr clone_expr(const Expr& e);

}  // namespace miohint::msl
