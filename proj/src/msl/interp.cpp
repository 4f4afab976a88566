#include "miohint/msl/interp.hpp"

#include <cmath>

namespace miohint::msl {

namespace {

constexpr int kMaxCallDepth = 128;

bool is_numeric(const TypedValue& v) {
  return v.tag() == ValueTag::Int || v.tag() == ValueTag::Float;
}

// Distance pair (to make the comparison true, to make it false) following
// the usual branch-distance rules; k = 1 keeps satisfied-side distance at 0
// and unsatisfied-side distance >= 1 for integers.
std::pair<double, double> comparison_distances(BinOp op, double a, double b) {
  const double k = 1.0;
  switch (op) {
    case BinOp::Lt: return {a < b ? 0.0 : a - b + k, a < b ? b - a : 0.0};
    case BinOp::Le: return {a <= b ? 0.0 : a - b, a <= b ? b - a + k : 0.0};
    case BinOp::Gt: return {a > b ? 0.0 : b - a + k, a > b ? a - b : 0.0};
    case BinOp::Ge: return {a >= b ? 0.0 : b - a, a >= b ? a - b + k : 0.0};
    case BinOp::Eq: return {std::fabs(a - b), a == b ? k : 0.0};
    case BinOp::Ne: return {a != b ? 0.0 : k, std::fabs(a - b)};
    default: return {0.0, 0.0};
  }
}

}  // namespace

TypedValue Interpreter::call_function(const std::string& name,
                                      const std::map<std::string, TypedValue>& request_env,
                                      const std::vector<TypedValue>& args) {
  request_ = &request_env;
  const FunctionDecl* fn = program_.function(name);
  if (!fn) throw RuntimeError("no such function '" + name + "'", SourceLoc{});
  if (args.size() != fn->params.size())
    throw RuntimeError("function '" + name + "' expects " + std::to_string(fn->params.size()) +
                           " arguments",
                       fn->loc);
  Frame frame;
  for (std::size_t i = 0; i < args.size(); ++i) frame.locals[fn->params[i].name] = args[i];
  TypedValue ret;
  exec_block(fn->body, frame, ret);
  return ret;
}

TypedValue Interpreter::eval_expression(const Expr& e,
                                        const std::map<std::string, TypedValue>& request_env) {
  request_ = &request_env;
  Frame frame;
  return eval(e, frame);
}

Interpreter::Flow Interpreter::exec_block(const std::vector<StmtPtr>& body, Frame& frame,
                                          TypedValue& ret) {
  for (const auto& s : body) {
    if (exec_stmt(*s, frame, ret) == Flow::Returned) return Flow::Returned;
  }
  return Flow::Normal;
}

Interpreter::Flow Interpreter::exec_stmt(const Stmt& s, Frame& frame, TypedValue& ret) {
  mark_line(s.loc);
  switch (s.kind) {
    case Stmt::Kind::Let:
    case Stmt::Kind::Assign:
      frame.locals[s.var_name] = eval(*s.expr, frame);
      return Flow::Normal;
    case Stmt::Kind::Return:
      ret = s.expr ? eval(*s.expr, frame) : TypedValue(nullptr);
      return Flow::Returned;
    case Stmt::Kind::ExprStmt:
      eval(*s.expr, frame);
      return Flow::Normal;
    case Stmt::Kind::If: {
      const Expr& cond = *s.expr;
      bool taken;
      double dist_true = 1.0, dist_false = 1.0;
      if (cond.kind == Expr::Kind::Binary && is_comparison(cond.bin_op)) {
        TypedValue lv = eval(*cond.lhs, frame);
        TypedValue rv = eval(*cond.rhs, frame);
        if (is_numeric(lv) && is_numeric(rv)) {
          // Exact comparison for the taken side; doubles only feed distances.
          if (lv.tag() == ValueTag::Int && rv.tag() == ValueTag::Int) {
            std::int64_t a = lv.as_int(), b = rv.as_int();
            switch (cond.bin_op) {
              case BinOp::Eq: taken = a == b; break;
              case BinOp::Ne: taken = a != b; break;
              case BinOp::Lt: taken = a < b; break;
              case BinOp::Le: taken = a <= b; break;
              case BinOp::Gt: taken = a > b; break;
              default: taken = a >= b; break;
            }
          } else {
            double a = lv.as_float(), b = rv.as_float();
            switch (cond.bin_op) {
              case BinOp::Eq: taken = a == b; break;
              case BinOp::Ne: taken = a != b; break;
              case BinOp::Lt: taken = a < b; break;
              case BinOp::Le: taken = a <= b; break;
              case BinOp::Gt: taken = a > b; break;
              default: taken = a >= b; break;
            }
          }
          auto [dt, df] = comparison_distances(cond.bin_op, lv.as_float(), rv.as_float());
          dist_true = taken ? 0.0 : std::max(dt, 1e-9);
          dist_false = taken ? std::max(df, 1e-9) : 0.0;
        } else {
          // Equality on strings/bools has no gradient: flat 0/1 distance.
          bool eq = lv == rv;
          if (cond.bin_op == BinOp::Eq) taken = eq;
          else if (cond.bin_op == BinOp::Ne) taken = !eq;
          else
            throw RuntimeError("ordering comparison needs numeric operands", cond.loc);
          dist_true = taken ? 0.0 : 1.0;
          dist_false = taken ? 1.0 : 0.0;
        }
      } else {
        TypedValue v = eval(cond, frame);
        if (v.tag() != ValueTag::Bool)
          throw RuntimeError("if condition must be a bool", cond.loc);
        taken = v.as_bool();
        dist_true = taken ? 0.0 : 1.0;
        dist_false = taken ? 1.0 : 0.0;
      }
      probe_branch(s, taken, dist_true, dist_false);
      return exec_block(taken ? s.then_body : s.else_body, frame, ret);
    }
  }
  return Flow::Normal;
}

TypedValue Interpreter::eval(const Expr& e, Frame& frame) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return TypedValue(e.int_val);
    case Expr::Kind::FloatLit: return TypedValue(e.float_val);
    case Expr::Kind::StrLit: return TypedValue(e.str_val);
    case Expr::Kind::BoolLit: return TypedValue(e.bool_val);
    case Expr::Kind::NullLit: return TypedValue(nullptr);
    case Expr::Kind::Var: {
      auto it = frame.locals.find(e.name);
      if (it != frame.locals.end()) return it->second;
      if (program_.const_decl(e.name)) return const_value(e.name, e.loc);
      throw RuntimeError("undefined variable '" + e.name + "'", e.loc);
    }
    case Expr::Kind::RequestField: {
      if (!request_) throw RuntimeError("no request bound", e.loc);
      auto it = request_->find(e.name);
      if (it == request_->end())
        throw RuntimeError("request has no field '" + e.name + "'", e.loc);
      return it->second;
    }
    case Expr::Kind::Call: {
      if (is_builtin_free(e.name)) {
        if (e.args.size() != 1) throw RuntimeError("parseInt takes one argument", e.loc);
        TypedValue v = eval(*e.args[0], frame);
        if (v.tag() == ValueTag::Int) return v;
        if (v.tag() != ValueTag::Str) throw RuntimeError("parseInt needs a string", e.loc);
        const std::string& s = v.as_str();
        std::size_t pos = 0;
        if (s.empty()) throw RuntimeError("parseInt: empty string", e.loc);
        try {
          std::int64_t n = std::stoll(s, &pos);
          if (pos != s.size()) throw std::invalid_argument("trailing");
          return TypedValue(n);
        } catch (const std::exception&) {
          throw RuntimeError("parseInt: not an integer: '" + s + "'", e.loc);
        }
      }
      std::vector<TypedValue> args;
      for (const auto& a : e.args) args.push_back(eval(*a, frame));
      return call_user(e.name, std::move(args), e.loc);
    }
    case Expr::Kind::MethodCall: return eval_method(e, frame);
    case Expr::Kind::Binary: return eval_binary(e, frame);
    case Expr::Kind::Unary: {
      TypedValue v = eval(*e.operand, frame);
      if (e.un_op == UnOp::Not) {
        if (v.tag() != ValueTag::Bool) throw RuntimeError("'!' needs a bool", e.loc);
        return TypedValue(!v.as_bool());
      }
      if (v.tag() == ValueTag::Int) return TypedValue(-v.as_int());
      if (v.tag() == ValueTag::Float) return TypedValue(-v.as_float());
      throw RuntimeError("unary '-' needs a number", e.loc);
    }
  }
  throw RuntimeError("unreachable expression kind", e.loc);
}

TypedValue Interpreter::eval_binary(const Expr& e, Frame& frame) {
  // Short-circuit logic first.
  if (e.bin_op == BinOp::And || e.bin_op == BinOp::Or) {
    TypedValue l = eval(*e.lhs, frame);
    if (l.tag() != ValueTag::Bool) throw RuntimeError("logical operand must be bool", e.loc);
    if (e.bin_op == BinOp::And && !l.as_bool()) return TypedValue(false);
    if (e.bin_op == BinOp::Or && l.as_bool()) return TypedValue(true);
    TypedValue r = eval(*e.rhs, frame);
    if (r.tag() != ValueTag::Bool) throw RuntimeError("logical operand must be bool", e.loc);
    return r;
  }

  TypedValue l = eval(*e.lhs, frame);
  TypedValue r = eval(*e.rhs, frame);

  if (is_comparison(e.bin_op)) {
    if (is_numeric(l) && is_numeric(r)) {
      if (l.tag() == ValueTag::Int && r.tag() == ValueTag::Int) {
        std::int64_t a = l.as_int(), b = r.as_int();
        switch (e.bin_op) {
          case BinOp::Eq: return TypedValue(a == b);
          case BinOp::Ne: return TypedValue(a != b);
          case BinOp::Lt: return TypedValue(a < b);
          case BinOp::Le: return TypedValue(a <= b);
          case BinOp::Gt: return TypedValue(a > b);
          default: return TypedValue(a >= b);
        }
      }
      double a = l.as_float(), b = r.as_float();
      switch (e.bin_op) {
        case BinOp::Eq: return TypedValue(a == b);
        case BinOp::Ne: return TypedValue(a != b);
        case BinOp::Lt: return TypedValue(a < b);
        case BinOp::Le: return TypedValue(a <= b);
        case BinOp::Gt: return TypedValue(a > b);
        default: return TypedValue(a >= b);
      }
    }
    if (e.bin_op == BinOp::Eq) return TypedValue(l == r);
    if (e.bin_op == BinOp::Ne) return TypedValue(l != r);
    throw RuntimeError("ordering comparison needs numeric operands", e.loc);
  }

  if (e.bin_op == BinOp::Add && l.tag() == ValueTag::Str && r.tag() == ValueTag::Str)
    return TypedValue(l.as_str() + r.as_str());

  if (!is_numeric(l) || !is_numeric(r))
    throw RuntimeError("arithmetic needs numeric operands", e.loc);

  if (l.tag() == ValueTag::Int && r.tag() == ValueTag::Int) {
    std::int64_t a = l.as_int(), b = r.as_int();
    switch (e.bin_op) {
      case BinOp::Add: return TypedValue(a + b);
      case BinOp::Sub: return TypedValue(a - b);
      case BinOp::Mul: return TypedValue(a * b);
      case BinOp::Div:
        if (b == 0) throw RuntimeError("division by zero", e.loc);
        return TypedValue(a / b);
      case BinOp::Mod:
        if (b == 0) throw RuntimeError("modulo by zero", e.loc);
        return TypedValue(a % b);
      default: break;
    }
  }
  double a = l.as_float(), b = r.as_float();
  switch (e.bin_op) {
    case BinOp::Add: return TypedValue(a + b);
    case BinOp::Sub: return TypedValue(a - b);
    case BinOp::Mul: return TypedValue(a * b);
    case BinOp::Div:
      if (b == 0.0) throw RuntimeError("division by zero", e.loc);
      return TypedValue(a / b);
    default:
      throw RuntimeError("'%' needs integer operands", e.loc);
  }
}

TypedValue Interpreter::eval_method(const Expr& e, Frame& frame) {
  TypedValue recv = eval(*e.receiver, frame);
  std::vector<TypedValue> args;
  for (const auto& a : e.args) args.push_back(eval(*a, frame));

  if (!is_builtin_method(e.name))
    throw RuntimeError("unknown method '" + e.name + "'", e.loc);
  if (recv.tag() != ValueTag::Str)
    throw RuntimeError("method '" + e.name + "' needs a string receiver", e.loc);
  const std::string& s = recv.as_str();

  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw RuntimeError("method '" + e.name + "' expects " + std::to_string(n) + " arguments",
                         e.loc);
  };

  if (e.name == "length") {
    want(0);
    return TypedValue(static_cast<std::int64_t>(s.size()));
  }
  if (e.name == "matches") {
    want(1);
    if (args[0].tag() != ValueTag::Str) throw RuntimeError("matches needs a string pattern", e.loc);
    bool result = std::regex_match(s, compiled(args[0].as_str(), e.loc));
    probe_mr(e, result);
    return TypedValue(result);
  }
  if (e.name == "contains") {
    want(1);
    if (args[0].tag() != ValueTag::Str) throw RuntimeError("contains needs a string", e.loc);
    bool result = s.find(args[0].as_str()) != std::string::npos;
    probe_mr(e, result);
    return TypedValue(result);
  }
  if (e.name == "startsWith") {
    want(1);
    if (args[0].tag() != ValueTag::Str) throw RuntimeError("startsWith needs a string", e.loc);
    bool result = s.rfind(args[0].as_str(), 0) == 0;
    probe_mr(e, result);
    return TypedValue(result);
  }
  if (e.name == "substring") {
    want(2);
    if (args[0].tag() != ValueTag::Int || args[1].tag() != ValueTag::Int)
      throw RuntimeError("substring needs integer bounds", e.loc);
    std::int64_t a = args[0].as_int(), b = args[1].as_int();
    if (a < 0 || b < a || b > static_cast<std::int64_t>(s.size()))
      throw RuntimeError("substring bounds out of range", e.loc);
    return TypedValue(s.substr(static_cast<std::size_t>(a), static_cast<std::size_t>(b - a)));
  }
  // group(pattern, index)
  want(2);
  if (args[0].tag() != ValueTag::Str || args[1].tag() != ValueTag::Int)
    throw RuntimeError("group needs (pattern, index)", e.loc);
  std::smatch m;
  if (!std::regex_match(s, m, compiled(args[0].as_str(), e.loc)))
    throw RuntimeError("group: string does not match pattern", e.loc);
  std::int64_t idx = args[1].as_int();
  if (idx < 0 || idx >= static_cast<std::int64_t>(m.size()))
    throw RuntimeError("group: index out of range", e.loc);
  return TypedValue(m[static_cast<std::size_t>(idx)].str());
}

TypedValue Interpreter::call_user(const std::string& name, std::vector<TypedValue> args,
                                  const SourceLoc& at) {
  const FunctionDecl* fn = program_.function(name);
  if (!fn) throw RuntimeError("call to unknown function '" + name + "'", at);
  if (args.size() != fn->params.size())
    throw RuntimeError("function '" + name + "' expects " + std::to_string(fn->params.size()) +
                           " arguments",
                       at);
  if (++depth_ > kMaxCallDepth) {
    --depth_;
    throw RuntimeError("call depth limit exceeded", at);
  }
  Frame frame;
  for (std::size_t i = 0; i < args.size(); ++i) frame.locals[fn->params[i].name] = std::move(args[i]);
  TypedValue ret;
  exec_block(fn->body, frame, ret);
  --depth_;
  return ret;
}

TypedValue Interpreter::const_value(const std::string& name, const SourceLoc& at) {
  auto it = const_cache_.find(name);
  if (it != const_cache_.end()) return it->second;
  if (const_in_progress_.count(name))
    throw RuntimeError("cyclic constant definition '" + name + "'", at);
  const ConstDecl* c = program_.const_decl(name);
  const_in_progress_.insert(name);
  Frame frame;
  TypedValue v = eval(*c->init, frame);
  const_in_progress_.erase(name);
  const_cache_[name] = v;
  return v;
}

const std::regex& Interpreter::compiled(const std::string& pattern, const SourceLoc& at) {
  auto it = regex_cache_.find(pattern);
  if (it != regex_cache_.end()) return it->second;
  try {
    auto [ins, _] = regex_cache_.emplace(pattern, std::regex(pattern));
    return ins->second;
  } catch (const std::regex_error&) {
    throw RuntimeError("invalid regex pattern: " + pattern, at);
  }
}

void Interpreter::probe_branch(const Stmt& s, bool taken, double dist_true, double dist_false) {
  if (!coverage_) return;
  Target true_side{TargetKind::Branch, s.loc.unit, s.loc.line, s.branch_position, Expected::TrueSide};
  Target false_side = true_side;
  false_side.expected = Expected::FalseSide;

  auto bump = [&](const Target& t, double score) {
    double& slot = coverage_->scores[t];
    if (score > slot) slot = score;
  };
  if (taken) {
    coverage_->covered.insert(true_side);
    bump(true_side, 1.0);
    bump(false_side, 1.0 / (1.0 + std::max(dist_false, 1e-9)));
  } else {
    coverage_->covered.insert(false_side);
    bump(false_side, 1.0);
    bump(true_side, 1.0 / (1.0 + std::max(dist_true, 1e-9)));
  }
}

void Interpreter::probe_mr(const Expr& call, bool outcome) {
  if (!coverage_ || call.mr_position < 0) return;
  Target t{TargetKind::MethodReplacement, call.loc.unit, call.loc.line, call.mr_position,
           outcome ? Expected::ReturnsTrue : Expected::ReturnsFalse};
  Target other = t;
  other.expected = outcome ? Expected::ReturnsFalse : Expected::ReturnsTrue;
  coverage_->covered.insert(t);
  double& a = coverage_->scores[t];
  if (a < 1.0) a = 1.0;
  double& b = coverage_->scores[other];
  if (b < 0.5) b = 0.5;
}

void Interpreter::mark_line(const SourceLoc& loc) {
  if (coverage_) coverage_->lines.insert({loc.unit, loc.line});
}

}  // namespace miohint::msl
