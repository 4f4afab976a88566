#include "miohint/msl/parser.hpp"

#include <sstream>

namespace miohint::msl {

namespace {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer";
    case Tok::FloatLit: return "float";
    case Tok::StrLit: return "string";
    case Tok::Doc: return "doc comment";
    case Tok::KwFun: return "'fun'";
    case Tok::KwConst: return "'const'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwNull: return "'null'";
    case Tok::KwRequest: return "'request'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semicolon: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Assign: return "'='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string unit) : toks_(std::move(tokens)), unit_(std::move(unit)) {}

  Unit parse_unit_decls(const std::string& source) {
    Unit u;
    u.name = unit_;
    std::istringstream ss(source);
    std::string line;
    while (std::getline(ss, line)) u.source_lines.push_back(line);

    while (peek().kind != Tok::Eof) {
      std::string doc;
      int doc_start_line = -1;
      while (peek().kind == Tok::Doc) {
        if (doc_start_line < 0) doc_start_line = peek().line;
        if (!doc.empty()) doc += "\n";
        doc += peek().str_val;
        next();
      }
      if (peek().kind == Tok::KwConst) {
        ConstDecl c = parse_const();
        c.doc = doc;
        int start = doc_start_line > 0 ? doc_start_line : c.loc.line;
        c.source_text = slice_lines(u.source_lines, start, c.loc.line);
        u.consts.push_back(std::move(c));
      } else if (peek().kind == Tok::KwFun) {
        FunctionDecl f = parse_function();
        f.doc = doc;
        int start = doc_start_line > 0 ? doc_start_line : f.loc.line;
        f.source_text = slice_lines(u.source_lines, start, f.body_end_line);
        u.functions.push_back(std::move(f));
      } else {
        fail({"'fun'", "'const'"});
      }
    }
    return u;
  }

  ExprPtr parse_single_expression() {
    ExprPtr e = parse_expr();
    expect(Tok::Eof);
    return e;
  }

  StmtPtr parse_single_statement() {
    StmtPtr s = parse_stmt();
    if (peek().kind == Tok::Semicolon) next();
    expect(Tok::Eof);
    return s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = pos_ + ahead;
    return idx < toks_.size() ? toks_[idx] : toks_.back();
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "syntax error at " + std::to_string(t.line) + ":" + std::to_string(t.col) +
                      ": got " + tok_name(t.kind);
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += " or ";
        msg += expected[i];
      }
    }
    throw SyntaxError(msg, t.line, t.col, std::move(expected));
  }

  Token expect(Tok kind) {
    if (peek().kind != kind) fail({tok_name(kind)});
    return next();
  }

  SourceLoc loc_of(const Token& t) const { return SourceLoc{unit_, t.line, t.col}; }

  static std::string slice_lines(const std::vector<std::string>& lines, int start, int end) {
    std::string out;
    for (int l = start; l <= end && l <= static_cast<int>(lines.size()); ++l) {
      if (l >= 1) {
        out += lines[static_cast<std::size_t>(l - 1)];
        out += "\n";
      }
    }
    return out;
  }

  ConstDecl parse_const() {
    ConstDecl c;
    c.loc = loc_of(peek());
    expect(Tok::KwConst);
    c.name = expect(Tok::Ident).text;
    expect(Tok::Assign);
    c.init = parse_expr();
    if (peek().kind == Tok::Semicolon) next();
    return c;
  }

  FunctionDecl parse_function() {
    FunctionDecl f;
    f.loc = loc_of(peek());
    expect(Tok::KwFun);
    f.name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    if (peek().kind != Tok::RParen) {
      while (true) {
        Param p;
        p.name = expect(Tok::Ident).text;
        expect(Tok::Colon);
        p.type = parse_type();
        f.params.push_back(std::move(p));
        if (peek().kind == Tok::Comma) { next(); continue; }
        break;
      }
    }
    expect(Tok::RParen);
    if (peek().kind == Tok::Colon) {
      next();
      f.return_type = parse_type();
    }
    f.body = parse_block(&f.body_end_line);
    return f;
  }

  std::string parse_type() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || (t.text != "int" && t.text != "float" && t.text != "str" && t.text != "bool"))
      fail({"'int'", "'float'", "'str'", "'bool'"});
    return next().text;
  }

  std::vector<StmtPtr> parse_block(int* end_line) {
    expect(Tok::LBrace);
    std::vector<StmtPtr> body;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::Eof) fail({"'}'", "statement"});
      body.push_back(parse_stmt());
      while (peek().kind == Tok::Semicolon) next();
    }
    const Token& rb = expect(Tok::RBrace);
    if (end_line) *end_line = rb.line;
    return body;
  }

  StmtPtr parse_stmt() {
    const Token& t = peek();
    auto s = std::make_unique<Stmt>();
    s->loc = loc_of(t);
    switch (t.kind) {
      case Tok::KwLet: {
        next();
        s->kind = Stmt::Kind::Let;
        s->var_name = expect(Tok::Ident).text;
        expect(Tok::Assign);
        s->expr = parse_expr();
        s->end_line = s->loc.line;
        return s;
      }
      case Tok::KwIf: {
        next();
        s->kind = Stmt::Kind::If;
        expect(Tok::LParen);
        s->expr = parse_expr();
        expect(Tok::RParen);
        int end = s->loc.line;
        s->then_body = parse_block(&end);
        s->end_line = end;
        if (peek().kind == Tok::KwElse) {
          next();
          if (peek().kind == Tok::KwIf) {
            s->else_body.push_back(parse_stmt());
            s->end_line = s->else_body.back()->end_line;
          } else {
            int else_end = end;
            s->else_body = parse_block(&else_end);
            s->end_line = else_end;
          }
        }
        return s;
      }
      case Tok::KwReturn: {
        next();
        s->kind = Stmt::Kind::Return;
        // `return` may be bare; treat `}` / `;` / next statement keyword as no value.
        if (peek().kind != Tok::RBrace && peek().kind != Tok::Semicolon && peek().kind != Tok::Eof &&
            peek().kind != Tok::KwLet && peek().kind != Tok::KwIf && peek().kind != Tok::KwReturn)
          s->expr = parse_expr();
        s->end_line = s->loc.line;
        return s;
      }
      case Tok::Ident: {
        if (peek(1).kind == Tok::Assign) {
          s->kind = Stmt::Kind::Assign;
          s->var_name = next().text;
          next();  // '='
          s->expr = parse_expr();
          s->end_line = s->loc.line;
          return s;
        }
        break;
      }
      default:
        break;
    }
    s->kind = Stmt::Kind::ExprStmt;
    s->expr = parse_expr();
    s->end_line = s->loc.line;
    return s;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr e = parse_and();
    while (peek().kind == Tok::OrOr) {
      SourceLoc l = loc_of(peek());
      next();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = l;
      b->bin_op = BinOp::Or;
      b->lhs = std::move(e);
      b->rhs = parse_and();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_not();
    while (peek().kind == Tok::AndAnd) {
      SourceLoc l = loc_of(peek());
      next();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = l;
      b->bin_op = BinOp::And;
      b->lhs = std::move(e);
      b->rhs = parse_not();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_not() {
    if (peek().kind == Tok::Bang) {
      SourceLoc l = loc_of(peek());
      next();
      auto u = std::make_unique<Expr>();
      u->kind = Expr::Kind::Unary;
      u->loc = l;
      u->un_op = UnOp::Not;
      u->operand = parse_not();
      return u;
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr e = parse_additive();
    Tok k = peek().kind;
    if (k == Tok::Eq || k == Tok::Ne || k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge) {
      SourceLoc l = loc_of(peek());
      next();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = l;
      switch (k) {
        case Tok::Eq: b->bin_op = BinOp::Eq; break;
        case Tok::Ne: b->bin_op = BinOp::Ne; break;
        case Tok::Lt: b->bin_op = BinOp::Lt; break;
        case Tok::Le: b->bin_op = BinOp::Le; break;
        case Tok::Gt: b->bin_op = BinOp::Gt; break;
        default: b->bin_op = BinOp::Ge; break;
      }
      b->lhs = std::move(e);
      b->rhs = parse_additive();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Tok k = peek().kind;
      SourceLoc l = loc_of(peek());
      next();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = l;
      b->bin_op = k == Tok::Plus ? BinOp::Add : BinOp::Sub;
      b->lhs = std::move(e);
      b->rhs = parse_multiplicative();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash || peek().kind == Tok::Percent) {
      Tok k = peek().kind;
      SourceLoc l = loc_of(peek());
      next();
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = l;
      b->bin_op = k == Tok::Star ? BinOp::Mul : (k == Tok::Slash ? BinOp::Div : BinOp::Mod);
      b->lhs = std::move(e);
      b->rhs = parse_unary();
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::Minus) {
      SourceLoc l = loc_of(peek());
      next();
      auto u = std::make_unique<Expr>();
      u->kind = Expr::Kind::Unary;
      u->loc = l;
      u->un_op = UnOp::Neg;
      u->operand = parse_unary();
      return u;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (peek().kind == Tok::Dot) {
      next();
      Token name = expect(Tok::Ident);
      if (peek().kind == Tok::LParen) {
        auto call = std::make_unique<Expr>();
        call->kind = Expr::Kind::MethodCall;
        call->loc = loc_of(name);
        call->name = name.text;
        call->receiver = std::move(e);
        call->args = parse_args();
        e = std::move(call);
      } else {
        // Plain field access is only defined on the request object.
        if (e->kind != Expr::Kind::Var || e->name != "request")
          throw SyntaxError("field access is only allowed on 'request' (at " +
                                std::to_string(name.line) + ":" + std::to_string(name.col) + ")",
                            name.line, name.col, {"'('"});
        auto rf = std::make_unique<Expr>();
        rf->kind = Expr::Kind::RequestField;
        rf->loc = loc_of(name);
        rf->name = name.text;
        e = std::move(rf);
      }
    }
    return e;
  }

  std::vector<ExprPtr> parse_args() {
    expect(Tok::LParen);
    std::vector<ExprPtr> args;
    if (peek().kind != Tok::RParen) {
      while (true) {
        args.push_back(parse_expr());
        if (peek().kind == Tok::Comma) { next(); continue; }
        break;
      }
    }
    expect(Tok::RParen);
    return args;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    auto e = std::make_unique<Expr>();
    e->loc = loc_of(t);
    switch (t.kind) {
      case Tok::IntLit:
        e->kind = Expr::Kind::IntLit;
        e->int_val = t.int_val;
        next();
        return e;
      case Tok::FloatLit:
        e->kind = Expr::Kind::FloatLit;
        e->float_val = t.float_val;
        next();
        return e;
      case Tok::StrLit:
        e->kind = Expr::Kind::StrLit;
        e->str_val = t.str_val;
        next();
        return e;
      case Tok::KwTrue:
      case Tok::KwFalse:
        e->kind = Expr::Kind::BoolLit;
        e->bool_val = t.kind == Tok::KwTrue;
        next();
        return e;
      case Tok::KwNull:
        e->kind = Expr::Kind::NullLit;
        next();
        return e;
      case Tok::KwRequest:
        // Represented as a Var named "request"; postfix handling converts
        // `request.<field>` into a RequestField node.
        e->kind = Expr::Kind::Var;
        e->name = "request";
        next();
        return e;
      case Tok::Ident: {
        std::string name = next().text;
        if (peek().kind == Tok::LParen) {
          e->kind = Expr::Kind::Call;
          e->name = std::move(name);
          e->args = parse_args();
        } else {
          e->kind = Expr::Kind::Var;
          e->name = std::move(name);
        }
        return e;
      }
      case Tok::LParen: {
        next();
        ExprPtr inner = parse_expr();
        expect(Tok::RParen);
        return inner;
      }
      default:
        fail({"expression"});
    }
  }

  std::vector<Token> toks_;
  std::string unit_;
  std::size_t pos_ = 0;
};

}  // namespace

Unit parse_unit(const std::string& source, const std::string& unit_name) {
  Parser p(lex(source), unit_name);
  return p.parse_unit_decls(source);
}

ExprPtr parse_expression_text(const std::string& text) {
  Parser p(lex(text), "<expr>");
  return p.parse_single_expression();
}

StmtPtr parse_statement_text(const std::string& text) {
  std::string trimmed = text;
  // Tolerate a `const` prefix: reuse the assignment form.
  if (trimmed.rfind("const ", 0) == 0) trimmed = "let " + trimmed.substr(6);
  Parser p(lex(trimmed), "<stmt>");
  return p.parse_single_statement();
}

}  // namespace miohint::msl
