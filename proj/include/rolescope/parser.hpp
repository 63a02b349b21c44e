#pragma once

#include <stdexcept>
#include <string>

#include "rolescope/ast.hpp"

namespace rolescope {

// First lexical or grammatical violation in document order, including use
// of an undeclared variable. Positions are 1-based into the input text.
struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  std::string expected; // what the parser was looking for
  std::string found;    // the offending lexeme

  ParseError(int line, int column, std::string expected, std::string found);
};

// Parses concrete syntax into a validated Program. Statement labels are
// assigned pre-order per function, starting at 1. Throws ParseError.
Program parse_program(const std::string& src);

// Canonical concrete syntax; parse_program(pretty_print(p)) is
// structurally equal to p.
std::string pretty_print(const Program& p);

std::string pretty_print(const Stmt& s);
std::string pretty_print(const Expr& e);
std::string pretty_print(const BoolExpr& b);

} // namespace rolescope
