#include "miohint/msl/lexer.hpp"

#include <cctype>
#include <map>

namespace miohint::msl {

namespace {

const std::map<std::string, Tok> kKeywords = {
    {"fun", Tok::KwFun},       {"const", Tok::KwConst},   {"let", Tok::KwLet},
    {"if", Tok::KwIf},         {"else", Tok::KwElse},     {"return", Tok::KwReturn},
    {"true", Tok::KwTrue},     {"false", Tok::KwFalse},   {"null", Tok::KwNull},
    {"request", Tok::KwRequest},
};

}  // namespace

std::vector<Token> lex(const std::string& source) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto make = [&](Tok kind, std::string text) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  };
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < n; ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < n) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      bool is_doc = i + 2 < n && source[i + 2] == '/';
      Token t = make(Tok::Doc, "");
      std::size_t start = i;
      while (i < n && source[i] != '\n') advance(1);
      if (is_doc) {
        t.str_val = source.substr(start, i - start);
        out.push_back(std::move(t));
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Token t = make(Tok::IntLit, "");
      std::size_t start = i;
      while (i < n && std::isdigit(static_cast<unsigned char>(source[i]))) advance(1);
      bool is_float = false;
      if (i < n && source[i] == '.' && i + 1 < n &&
          std::isdigit(static_cast<unsigned char>(source[i + 1]))) {
        is_float = true;
        advance(1);
        while (i < n && std::isdigit(static_cast<unsigned char>(source[i]))) advance(1);
      }
      t.text = source.substr(start, i - start);
      try {
        if (is_float) {
          t.kind = Tok::FloatLit;
          t.float_val = std::stod(t.text);
        } else {
          t.int_val = std::stoll(t.text);
        }
      } catch (const std::exception&) {
        throw SyntaxError("numeric literal out of range: " + t.text, t.line, t.col);
      }
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      Token t = make(Tok::Ident, "");
      std::size_t start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_'))
        advance(1);
      t.text = source.substr(start, i - start);
      auto kw = kKeywords.find(t.text);
      if (kw != kKeywords.end()) t.kind = kw->second;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"') {
      Token t = make(Tok::StrLit, "");
      advance(1);
      std::string value;
      bool closed = false;
      while (i < n) {
        char d = source[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < n) {
          char e = source[i + 1];
          switch (e) {
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            case 'r': value.push_back('\r'); break;
            case '"': value.push_back('"'); break;
            case '\\': value.push_back('\\'); break;
            default: value.push_back(e); break;
          }
          advance(2);
          continue;
        }
        value.push_back(d);
        advance(1);
      }
      if (!closed) throw SyntaxError("unterminated string literal", t.line, t.col);
      t.str_val = std::move(value);
      out.push_back(std::move(t));
      continue;
    }

    Token t = make(Tok::Eof, std::string(1, c));
    auto two = [&](char second) { return i + 1 < n && source[i + 1] == second; };
    switch (c) {
      case '(': t.kind = Tok::LParen; advance(1); break;
      case ')': t.kind = Tok::RParen; advance(1); break;
      case '{': t.kind = Tok::LBrace; advance(1); break;
      case '}': t.kind = Tok::RBrace; advance(1); break;
      case ',': t.kind = Tok::Comma; advance(1); break;
      case ':': t.kind = Tok::Colon; advance(1); break;
      case ';': t.kind = Tok::Semicolon; advance(1); break;
      case '.': t.kind = Tok::Dot; advance(1); break;
      case '+': t.kind = Tok::Plus; advance(1); break;
      case '-': t.kind = Tok::Minus; advance(1); break;
      case '*': t.kind = Tok::Star; advance(1); break;
      case '/': t.kind = Tok::Slash; advance(1); break;
      case '%': t.kind = Tok::Percent; advance(1); break;
      case '=':
        if (two('=')) { t.kind = Tok::Eq; t.text = "=="; advance(2); }
        else { t.kind = Tok::Assign; advance(1); }
        break;
      case '!':
        if (two('=')) { t.kind = Tok::Ne; t.text = "!="; advance(2); }
        else { t.kind = Tok::Bang; advance(1); }
        break;
      case '<':
        if (two('=')) { t.kind = Tok::Le; t.text = "<="; advance(2); }
        else { t.kind = Tok::Lt; advance(1); }
        break;
      case '>':
        if (two('=')) { t.kind = Tok::Ge; t.text = ">="; advance(2); }
        else { t.kind = Tok::Gt; advance(1); }
        break;
      case '&':
        if (two('&')) { t.kind = Tok::AndAnd; t.text = "&&"; advance(2); }
        else throw SyntaxError("unexpected character '&'", line, col);
        break;
      case '|':
        if (two('|')) { t.kind = Tok::OrOr; t.text = "||"; advance(2); }
        else throw SyntaxError("unexpected character '|'", line, col);
        break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }

  out.push_back(Token{Tok::Eof, "<eof>", 0, 0.0, "", line, col});
  return out;
}

}  // namespace miohint::msl
