#pragma once

#include <string>

#include "miohint/msl/ast.hpp"
#include "miohint/msl/lexer.hpp"

namespace miohint::msl {

// Parses one source unit. Doc comments attach to the following declaration;
// statements carry exact line/column locations. Throws SyntaxError.
Unit parse_unit(const std::string& source, const std::string& unit_name);

// Parses a standalone expression (must consume the whole input).
ExprPtr parse_expression_text(const std::string& text);

// Parses a single statement, accepting the `let x = e`, `const X = e`,
// `x = e`, `return e` and bare-expression forms. Used to re-interpret
// def-use chain lines inside the solver backend.
StmtPtr parse_statement_text(const std::string& text);

}  // namespace miohint::msl
