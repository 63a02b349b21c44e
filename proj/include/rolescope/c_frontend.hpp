#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rolescope/ast.hpp"
#include "rolescope/parser.hpp" // ParseError

// Lowers a restricted C subset, one Function per C function definition.
// Anything recognized but outside the subset degrades to skip and is
// recorded; only malformed C raises ParseError.

namespace rolescope {

struct LoweringReport {
  std::string function; // "<file scope>" for items outside any function
  std::vector<std::pair<int, std::string>> skipped_constructs; // line, what
  std::vector<VarName> synthetic_vars; // minted return slots and temps
};

struct LoweredProgram {
  Program program;
  std::vector<LoweringReport> reports;
};

// Supported subset: int/float/char (plus modifier spellings) declarations
// with initializers, assignments and compound assignments, ++/--, calls,
// if/else, while, do/while, for, blocks. Pointer reads become synthetic
// array reads so the unresolved-assignment analysis sees them; &x call
// arguments become by-reference arguments; scalar conditions compare
// against zero; shifts by constants become multiplication/division by a
// power of two.
LoweredProgram lower_c(const std::string& src);

} // namespace rolescope
