#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miohint/errors.hpp"

namespace miohint::msl {

class SyntaxError : public Error {
 public:
  SyntaxError(std::string msg, int line, int col, std::vector<std::string> expected = {})
      : Error(std::move(msg)), line(line), col(col), expected(std::move(expected)) {}
  int line;
  int col;
  std::vector<std::string> expected;
};

enum class Tok {
  Ident, IntLit, FloatLit, StrLit, Doc,
  KwFun, KwConst, KwLet, KwIf, KwElse, KwReturn, KwTrue, KwFalse, KwNull, KwRequest,
  LParen, RParen, LBrace, RBrace, Comma, Colon, Semicolon, Dot,
  Assign, Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash, Percent,
  AndAnd, OrOr, Bang, Eof
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::int64_t int_val = 0;
  double float_val = 0.0;
  std::string str_val;  // decoded string literal / doc line
  int line = 0;
  int col = 0;
};

std::vector<Token> lex(const std::string& source);

}  // namespace miohint::msl
