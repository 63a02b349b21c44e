#pragma once

#include <string>

#include "rolescope/ast.hpp"
#include "rolescope/parser.hpp"

namespace rolescope::testing {

// Wraps declarations and statements into a one-function program; most
// tests state their inputs as concrete syntax.
inline rolescope::Program parse_wrapped(const std::string& decls,
                                        const std::string& body) {
  return rolescope::parse_program("begin proc t() begin " + decls + "\n" +
                                  body + "\nend end");
}

inline rolescope::VarSet names(std::initializer_list<const char*> list) {
  rolescope::VarSet out;
  for (const char* n : list) out.insert(rolescope::VarName(n));
  return out;
}

} // namespace rolescope::testing
