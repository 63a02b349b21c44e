#pragma once

#include <map>
#include <string>
#include <vector>

#include "rolescope/ast.hpp"
#include "rolescope/engine.hpp"

// The sixteen concrete role analyses. Each gen function maps a statement
// (and, recursively, its expressions) to the set of variables it generates;
// the engine combines that set with the role's initial set.

namespace rolescope {

// --- gen functions, one per role -------------------------------------

VarSet gen_synt_const(const Stmt& s, const VarSet& res);
VarSet gen_const_assign(const Stmt& s, const VarSet& res);
VarSet gen_counter(const Stmt& s, const VarSet& res);
VarSet gen_linear(const Stmt& s, const VarSet& res);
VarSet gen_bool(const Stmt& s, const VarSet& res);
VarSet gen_input(const Stmt& s, const VarSet& res);
VarSet gen_output(const Stmt& s, const VarSet& res);
VarSet gen_branch_cond(const Stmt& s, const VarSet& res);
VarSet gen_bitvector(const Stmt& s, const VarSet& res);
VarSet gen_unres_assign(const Stmt& s, const VarSet& res);
VarSet gen_char(const Stmt& s, const VarSet& res);
VarSet gen_loop_it(const Stmt& s, const VarSet& res);
VarSet gen_file_descr(const Stmt& s, const VarSet& res);
VarSet gen_array_index(const Stmt& s, const VarSet& res);
VarSet gen_array_size(const Stmt& s, const VarSet& res);
VarSet gen_used_in_arithm(const Stmt& s, const VarSet& res);

// --- helper predicates (exposed for property tests) ------------------

// A linear combination of literals and variables currently in res.
// Bitwise forms, division, and array reads are never linear; a product is
// linear only when one factor is a literal.
bool is_linear(const Expr& e, const VarSet& res);

// The variable stepped by an increment/decrement expression: v in
// "v + num", "num + v", "v - num"; empty for every other shape.
VarSet increment_base(const Expr& e);

// Only literals and variables currently in res count as constant.
bool is_const_valued(const Expr& e, const VarSet& res);

// Literals 0 and 1, and variables currently in res.
bool is_bool_valued(const Expr& e, const VarSet& res);

// Character literals and variables currently in res.
bool is_char_valued(const Expr& e, const VarSet& res);

// Top-level operand variables of each comparison in a condition.
VarSet comparison_vars(const BoolExpr& b);

// Variables assigned anywhere in a statement (array targets excluded).
VarSet assignment_targets(const Stmt& s);

// --- standard-library recognition ------------------------------------

// Which call-argument positions a known library function marks, under
// which arity. Arities count the return slot: argument 1 receives the
// call's result, source-level arguments start at position 2.
struct StdlibRule {
  RoleId role{};
  int min_arity = 0;
  int max_arity = 0;
  std::vector<int> positions; // fixed 1-based positions
  int from_position = 0;      // if > 0, also capture from..arity
};

using StdlibTable = std::map<std::string, std::vector<StdlibRule>>;

const StdlibTable& stdlib_table();

// --- catalog ----------------------------------------------------------

// All sixteen analyses in RoleId order.
const std::vector<AnalysisSpec>& full_catalog();

// The subset naming exactly the given roles, in RoleId order.
std::vector<AnalysisSpec> catalog_subset(const std::vector<RoleId>& roles);

} // namespace rolescope
