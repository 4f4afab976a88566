#include "miohint/msl/ast.hpp"

namespace miohint::msl {

bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
      return true;
    default:
      return false;
  }
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

void collect_variables(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      out.push_back(e.name);
      break;
    case Expr::Kind::Call:
      for (const auto& a : e.args) collect_variables(*a, out);
      break;
    case Expr::Kind::MethodCall:
      collect_variables(*e.receiver, out);
      for (const auto& a : e.args) collect_variables(*a, out);
      break;
    case Expr::Kind::Binary:
      collect_variables(*e.lhs, out);
      collect_variables(*e.rhs, out);
      break;
    case Expr::Kind::Unary:
      collect_variables(*e.operand, out);
      break;
    default:
      break;
  }
}

void collect_callees(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Call:
      for (const auto& a : e.args) collect_callees(*a, out);
      out.push_back(e.name);
      break;
    case Expr::Kind::MethodCall:
      collect_callees(*e.receiver, out);
      for (const auto& a : e.args) collect_callees(*a, out);
      break;
    case Expr::Kind::Binary:
      collect_callees(*e.lhs, out);
      collect_callees(*e.rhs, out);
      break;
    case Expr::Kind::Unary:
      collect_callees(*e.operand, out);
      break;
    default:
      break;
  }
}

void collect_request_fields(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::RequestField:
      out.push_back(e.name);
      break;
    case Expr::Kind::Call:
      for (const auto& a : e.args) collect_request_fields(*a, out);
      break;
    case Expr::Kind::MethodCall:
      collect_request_fields(*e.receiver, out);
      for (const auto& a : e.args) collect_request_fields(*a, out);
      break;
    case Expr::Kind::Binary:
      collect_request_fields(*e.lhs, out);
      collect_request_fields(*e.rhs, out);
      break;
    case Expr::Kind::Unary:
      collect_request_fields(*e.operand, out);
      break;
    default:
      break;
  }
}

ExprPtr clone_expr(const Expr& e) {
  auto c = std::make_unique<Expr>();
  c->kind = e.kind;
  c->loc = e.loc;
  c->int_val = e.int_val;
  c->float_val = e.float_val;
  c->bool_val = e.bool_val;
  c->str_val = e.str_val;
  c->name = e.name;
  c->bin_op = e.bin_op;
  c->un_op = e.un_op;
  c->mr_position = e.mr_position;
  for (const auto& a : e.args) c->args.push_back(clone_expr(*a));
  if (e.receiver) c->receiver = clone_expr(*e.receiver);
  if (e.lhs) c->lhs = clone_expr(*e.lhs);
  if (e.rhs) c->rhs = clone_expr(*e.rhs);
  if (e.operand) c->operand = clone_expr(*e.operand);
  return c;
}

}  // namespace miohint::msl
