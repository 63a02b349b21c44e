#include "rolescope/catalog.hpp"

#include <algorithm>
#include <limits>

// Each analysis is transcribed from its defining equations. Statement
// rules differ per role in which sub-terms they visit: negative roles
// mostly look at assignments only, positive roles walk into the
// expressions that constitute their evidence. Array reads appearing as a
// whole right-hand side are "unresolved" assignments: they leave the
// negative result sets unchanged (UNRES_ASSIGN flags them instead).

namespace rolescope {

namespace {

VarSet unite(VarSet a, const VarSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

VarSet minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.begin()));
  return out;
}

VarSet intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

bool is_num(const Expr& e) { return e.kind == ExprKind::Num; }

// Capture for calls of known library functions: the matching rules for
// `role` applied to the call's argument list.
VarSet stdlib_captures(const Stmt& s, RoleId role) {
  auto it = stdlib_table().find(s.proc);
  if (it == stdlib_table().end()) return {};
  const int n = static_cast<int>(s.args.size());
  VarSet out;
  for (const StdlibRule& rule : it->second) {
    if (rule.role != role) continue;
    if (n < rule.min_arity || n > rule.max_arity) continue;
    for (int pos : rule.positions)
      if (pos >= 1 && pos <= n) out = unite(std::move(out), is_var(*s.args[pos - 1].expr));
    if (rule.from_position > 0)
      for (int i = rule.from_position; i <= n; ++i)
        out = unite(std::move(out), is_var(*s.args[i - 1].expr));
  }
  return out;
}

} // namespace

// --- helpers ----------------------------------------------------------

bool is_linear(const Expr& e, const VarSet& res) {
  switch (e.kind) {
    case ExprKind::Num: return true;
    case ExprKind::Var: return res.contains(e.var);
    case ExprKind::Aop:
      switch (e.aop) {
        case AopKind::Add:
        case AopKind::Sub:
          return is_linear(*e.lhs, res) && is_linear(*e.rhs, res);
        case AopKind::Mul:
          // A product is linear only when scaled by a literal.
          if (is_num(*e.lhs)) return is_linear(*e.rhs, res);
          if (is_num(*e.rhs)) return is_linear(*e.lhs, res);
          return false;
        case AopKind::Div: return false;
      }
      return false;
    case ExprKind::Bitop:
    case ExprKind::Bitnot:
    case ExprKind::ArrayRead:
      return false;
  }
  return false;
}

VarSet increment_base(const Expr& e) {
  if (e.kind != ExprKind::Aop) return {};
  if (e.aop == AopKind::Add) {
    if (is_num(*e.rhs)) return is_var(*e.lhs);
    if (is_num(*e.lhs)) return is_var(*e.rhs);
    return {};
  }
  if (e.aop == AopKind::Sub) {
    if (is_num(*e.rhs)) return is_var(*e.lhs);
    return {};
  }
  return {};
}

bool is_const_valued(const Expr& e, const VarSet& res) {
  switch (e.kind) {
    case ExprKind::Num: return true;
    case ExprKind::Var: return res.contains(e.var);
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return is_const_valued(*e.lhs, res) && is_const_valued(*e.rhs, res);
    case ExprKind::Bitnot: return is_const_valued(*e.lhs, res);
    case ExprKind::ArrayRead: return false;
  }
  return false;
}

bool is_bool_valued(const Expr& e, const VarSet& res) {
  switch (e.kind) {
    case ExprKind::Num:
      return e.num.kind == NumKind::Int &&
             (e.num.value == 0.0 || e.num.value == 1.0);
    case ExprKind::Var: return res.contains(e.var);
    default: return false;
  }
}

bool is_char_valued(const Expr& e, const VarSet& res) {
  switch (e.kind) {
    case ExprKind::Num: return e.num.kind == NumKind::Char;
    case ExprKind::Var: return res.contains(e.var);
    default: return false;
  }
}

VarSet comparison_vars(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp:
      return unite(is_var(*b.lhs), is_var(*b.rhs));
    case BoolKind::Not: return comparison_vars(*b.b1);
    case BoolKind::Logop:
      return unite(comparison_vars(*b.b1), comparison_vars(*b.b2));
  }
  return {};
}

VarSet assignment_targets(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Assign: return {s.target};
    case StmtKind::ArrayAssign: return {};
    case StmtKind::If:
      return unite(assignment_targets(*s.s1), assignment_targets(*s.s2));
    case StmtKind::Seq:
      return unite(assignment_targets(*s.s1), assignment_targets(*s.s2));
    case StmtKind::Skip: return {};
    case StmtKind::While: return assignment_targets(*s.s1);
    case StmtKind::Call: return {};
  }
  return {};
}

// --- SYNT_CONST: one-run negative -------------------------------------

VarSet gen_synt_const(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign: return {s.target};
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_synt_const(*s.s1, res), gen_synt_const(*s.s2, res));
    case StmtKind::While: return gen_synt_const(*s.s1, res);
    default: return {};
  }
}

// --- CONST_ASSIGN: fixed-point negative --------------------------------

VarSet gen_const_assign(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign:
      if (s.value->kind == ExprKind::ArrayRead) return {}; // unresolved
      return is_const_valued(*s.value, res) ? VarSet{} : VarSet{s.target};
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_const_assign(*s.s1, res), gen_const_assign(*s.s2, res));
    case StmtKind::While: return gen_const_assign(*s.s1, res);
    default: return {};
  }
}

// --- COUNTER: fixed-point negative -------------------------------------

VarSet gen_counter(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign:
      if (is_num(*s.value) && s.value->num.is_zero()) return {};
      if (s.value->kind == ExprKind::ArrayRead) return {}; // unresolved
      return minus({s.target}, increment_base(*s.value));
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_counter(*s.s1, res), gen_counter(*s.s2, res));
    case StmtKind::While: return gen_counter(*s.s1, res);
    default: return {};
  }
}

// --- LINEAR: fixed-point negative --------------------------------------

VarSet gen_linear(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign:
      if (s.value->kind == ExprKind::ArrayRead) return {}; // unresolved
      return is_linear(*s.value, res) ? VarSet{} : VarSet{s.target};
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_linear(*s.s1, res), gen_linear(*s.s2, res));
    case StmtKind::While: return gen_linear(*s.s1, res);
    default: return {};
  }
}

// --- BOOL: fixed-point negative ----------------------------------------

namespace {

// Top-level operands of arithmetic and bitwise forms; a boolean variable
// has no business in either. Not recursive past the immediate operands.
VarSet bool_expelled_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return unite(is_var(*e.lhs), is_var(*e.rhs));
    case ExprKind::Bitnot: return is_var(*e.lhs);
    case ExprKind::ArrayRead: return bool_expelled_expr(*e.lhs);
    default: return {};
  }
}

VarSet bool_expelled_cond(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp:
      return unite(bool_expelled_expr(*b.lhs), bool_expelled_expr(*b.rhs));
    case BoolKind::Not: return bool_expelled_cond(*b.b1);
    case BoolKind::Logop:
      return unite(bool_expelled_cond(*b.b1), bool_expelled_cond(*b.b2));
  }
  return {};
}

} // namespace

VarSet gen_bool(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign: {
      VarSet out = bool_expelled_expr(*s.value);
      if (s.value->kind == ExprKind::ArrayRead) return out; // unresolved
      if (!is_bool_valued(*s.value, res)) out.insert(s.target);
      return out;
    }
    case StmtKind::ArrayAssign:
      return unite(bool_expelled_expr(*s.index), bool_expelled_expr(*s.value));
    case StmtKind::If:
      return unite(bool_expelled_cond(*s.cond),
                   unite(gen_bool(*s.s1, res), gen_bool(*s.s2, res)));
    case StmtKind::Seq:
      return unite(gen_bool(*s.s1, res), gen_bool(*s.s2, res));
    case StmtKind::While:
      return unite(bool_expelled_cond(*s.cond), gen_bool(*s.s1, res));
    case StmtKind::Call: {
      VarSet out;
      for (const Arg& a : s.args)
        out = unite(std::move(out), bool_expelled_expr(*a.expr));
      return out;
    }
    default: return {};
  }
}

// --- INPUT: one-run positive -------------------------------------------

VarSet gen_input(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_input(*s.s1, res), gen_input(*s.s2, res));
    case StmtKind::While: return gen_input(*s.s1, res);
    case StmtKind::Call: {
      VarSet out;
      for (const Arg& a : s.args)
        if (a.mode == ArgMode::Ref) out = unite(std::move(out), is_var(*a.expr));
      return out;
    }
    default: return {};
  }
}

// --- OUTPUT: one-run positive ------------------------------------------

VarSet gen_output(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_output(*s.s1, res), gen_output(*s.s2, res));
    case StmtKind::While: return gen_output(*s.s1, res);
    case StmtKind::Call: return stdlib_captures(s, RoleId::Output);
    default: return {};
  }
}

// --- BRANCH_COND: one-run positive -------------------------------------

VarSet gen_branch_cond(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If: return all_vars(*s.cond); // branches not visited
    case StmtKind::Seq:
      return unite(gen_branch_cond(*s.s1, res), gen_branch_cond(*s.s2, res));
    case StmtKind::While: return gen_branch_cond(*s.s1, res);
    default: return {};
  }
}

// --- BITVECTOR: one-run positive ---------------------------------------

namespace {

VarSet bitvector_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::Num:
      return {};
    case ExprKind::Aop:
      return unite(bitvector_expr(*e.lhs), bitvector_expr(*e.rhs));
    case ExprKind::Bitop:
      return unite(unite(is_var(*e.lhs), is_var(*e.rhs)),
                   unite(bitvector_expr(*e.lhs), bitvector_expr(*e.rhs)));
    case ExprKind::Bitnot:
      return unite(is_var(*e.lhs), bitvector_expr(*e.lhs));
    case ExprKind::ArrayRead: return bitvector_expr(*e.lhs);
  }
  return {};
}

VarSet bitvector_cond(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp:
      return unite(bitvector_expr(*b.lhs), bitvector_expr(*b.rhs));
    case BoolKind::Not: return bitvector_cond(*b.b1);
    case BoolKind::Logop:
      return unite(bitvector_cond(*b.b1), bitvector_cond(*b.b2));
  }
  return {};
}

} // namespace

VarSet gen_bitvector(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign: {
      VarSet out = bitvector_expr(*s.value);
      if (s.value->kind == ExprKind::Bitop) out.insert(s.target);
      return out;
    }
    case StmtKind::ArrayAssign:
      return unite(bitvector_expr(*s.index), bitvector_expr(*s.value));
    case StmtKind::If:
      return unite(bitvector_cond(*s.cond),
                   unite(gen_bitvector(*s.s1, res), gen_bitvector(*s.s2, res)));
    case StmtKind::Seq:
      return unite(gen_bitvector(*s.s1, res), gen_bitvector(*s.s2, res));
    case StmtKind::While:
      return unite(bitvector_cond(*s.cond), gen_bitvector(*s.s1, res));
    case StmtKind::Call: {
      VarSet out;
      for (const Arg& a : s.args)
        out = unite(std::move(out), bitvector_expr(*a.expr));
      return out;
    }
    default: return {};
  }
}

// --- UNRES_ASSIGN: one-run positive ------------------------------------

VarSet gen_unres_assign(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign:
      return s.value->kind == ExprKind::ArrayRead ? VarSet{s.target} : VarSet{};
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_unres_assign(*s.s1, res), gen_unres_assign(*s.s2, res));
    case StmtKind::While: return gen_unres_assign(*s.s1, res);
    default: return {};
  }
}

// --- CHAR: fixed-point positive ----------------------------------------

VarSet gen_char(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign:
      return is_char_valued(*s.value, res) ? VarSet{s.target} : VarSet{};
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_char(*s.s1, res), gen_char(*s.s2, res));
    case StmtKind::While: return gen_char(*s.s1, res);
    case StmtKind::Call: return stdlib_captures(s, RoleId::Char);
    default: return {};
  }
}

// --- LOOP_IT: one-run positive -----------------------------------------

VarSet gen_loop_it(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_loop_it(*s.s1, res), gen_loop_it(*s.s2, res));
    case StmtKind::While:
      // Tested in the condition and updated in the body.
      return intersect(comparison_vars(*s.cond), assignment_targets(*s.s1));
    default: return {};
  }
}

// --- FILE_DESCR: one-run positive --------------------------------------

VarSet gen_file_descr(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_file_descr(*s.s1, res), gen_file_descr(*s.s2, res));
    case StmtKind::While: return gen_file_descr(*s.s1, res);
    case StmtKind::Call: return stdlib_captures(s, RoleId::FileDescr);
    default: return {};
  }
}

// --- ARRAY_INDEX: one-run positive -------------------------------------

namespace {

VarSet array_index_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::Num:
      return {};
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return unite(array_index_expr(*e.lhs), array_index_expr(*e.rhs));
    case ExprKind::Bitnot: return array_index_expr(*e.lhs);
    case ExprKind::ArrayRead: return is_var(*e.lhs);
  }
  return {};
}

VarSet array_index_cond(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp:
      return unite(array_index_expr(*b.lhs), array_index_expr(*b.rhs));
    case BoolKind::Not: return array_index_cond(*b.b1);
    case BoolKind::Logop:
      return unite(array_index_cond(*b.b1), array_index_cond(*b.b2));
  }
  return {};
}

} // namespace

VarSet gen_array_index(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign: return array_index_expr(*s.value);
    case StmtKind::ArrayAssign:
      return unite(is_var(*s.index), array_index_expr(*s.value));
    case StmtKind::If:
      return unite(array_index_cond(*s.cond),
                   unite(gen_array_index(*s.s1, res),
                         gen_array_index(*s.s2, res)));
    case StmtKind::Seq:
      return unite(gen_array_index(*s.s1, res), gen_array_index(*s.s2, res));
    case StmtKind::While:
      return unite(array_index_cond(*s.cond), gen_array_index(*s.s1, res));
    case StmtKind::Call: {
      VarSet out;
      for (const Arg& a : s.args)
        out = unite(std::move(out), array_index_expr(*a.expr));
      return out;
    }
    default: return {};
  }
}

// --- ARRAY_SIZE: one-run positive --------------------------------------

VarSet gen_array_size(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      return unite(gen_array_size(*s.s1, res), gen_array_size(*s.s2, res));
    case StmtKind::While: return gen_array_size(*s.s1, res);
    case StmtKind::Call: return stdlib_captures(s, RoleId::ArraySize);
    default: return {};
  }
}

// --- USED_IN_ARITHM: one-run positive ----------------------------------

namespace {

VarSet arith_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::Num:
      return {};
    case ExprKind::Aop:
      return unite(unite(is_var(*e.lhs), is_var(*e.rhs)),
                   unite(arith_expr(*e.lhs), arith_expr(*e.rhs)));
    case ExprKind::Bitop:
      return unite(arith_expr(*e.lhs), arith_expr(*e.rhs));
    case ExprKind::Bitnot: return arith_expr(*e.lhs);
    case ExprKind::ArrayRead: return arith_expr(*e.lhs);
  }
  return {};
}

VarSet arith_cond(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return unite(arith_expr(*b.lhs), arith_expr(*b.rhs));
    case BoolKind::Not: return arith_cond(*b.b1);
    case BoolKind::Logop: return unite(arith_cond(*b.b1), arith_cond(*b.b2));
  }
  return {};
}

} // namespace

VarSet gen_used_in_arithm(const Stmt& s, const VarSet& res) {
  switch (s.kind) {
    case StmtKind::Assign: return arith_expr(*s.value);
    case StmtKind::ArrayAssign:
      return unite(arith_expr(*s.index), arith_expr(*s.value));
    case StmtKind::If:
      return unite(arith_cond(*s.cond),
                   unite(gen_used_in_arithm(*s.s1, res),
                         gen_used_in_arithm(*s.s2, res)));
    case StmtKind::Seq:
      return unite(gen_used_in_arithm(*s.s1, res),
                   gen_used_in_arithm(*s.s2, res));
    case StmtKind::While:
      return unite(arith_cond(*s.cond), gen_used_in_arithm(*s.s1, res));
    case StmtKind::Call: {
      VarSet out;
      for (const Arg& a : s.args)
        out = unite(std::move(out), arith_expr(*a.expr));
      return out;
    }
    default: return {};
  }
}

// --- stdlib table -------------------------------------------------------

const StdlibTable& stdlib_table() {
  static const StdlibTable table = [] {
    constexpr int kAny = std::numeric_limits<int>::max();
    StdlibTable t;
    t["open"] = {{RoleId::FileDescr, 3, 4, {1}, 0}};
    t["read"] = {{RoleId::FileDescr, 4, 4, {2}, 0}};
    t["write"] = {{RoleId::FileDescr, 4, 4, {2}, 0}};
    t["malloc"] = {{RoleId::ArraySize, 2, 2, {2}, 0}};
    t["printf"] = {{RoleId::Output, 1, kAny, {}, 2}};
    t["sprintf"] = {{RoleId::Output, 1, kAny, {}, 3}};
    t["fprintf"] = {{RoleId::Output, 1, kAny, {}, 3}};
    t["getchar"] = {{RoleId::Char, 1, 1, {1}, 0}};
    t["getc"] = {{RoleId::Char, 2, 2, {1}, 0}};
    t["fgetc"] = {{RoleId::Char, 2, 2, {1}, 0}};
    // tolower/toupper mark both the result slot and the argument.
    t["tolower"] = {{RoleId::Char, 2, 2, {1, 2}, 0}};
    t["toupper"] = {{RoleId::Char, 2, 2, {1, 2}, 0}};
    t["putchar"] = {{RoleId::Char, 2, 2, {2}, 0}};
    for (const char* name :
         {"isalnum", "isblank", "iscntrl", "isdigit", "isgraph", "islower",
          "isprint", "ispunct", "isspace", "isupper", "isxdigit"})
      t[name] = {{RoleId::Char, 2, 2, {2}, 0}};
    return t;
  }();
  return table;
}

// --- catalog ------------------------------------------------------------

const std::vector<AnalysisSpec>& full_catalog() {
  static const std::vector<AnalysisSpec> catalog = {
      {RoleId::SyntConst, InitKind::AllVars, CombineOp::SetMinus,
       EvalMode::OneRun, gen_synt_const,
       "never assigned anywhere in the function"},
      {RoleId::ConstAssign, InitKind::AllVars, CombineOp::SetMinus,
       EvalMode::FixedPoint, gen_const_assign,
       "assigned only literals or other constant-assigned variables"},
      {RoleId::Counter, InitKind::AllVars, CombineOp::SetMinus,
       EvalMode::FixedPoint, gen_counter,
       "changed only by increments, decrements, or resets to zero"},
      {RoleId::Linear, InitKind::AllVars, CombineOp::SetMinus,
       EvalMode::FixedPoint, gen_linear,
       "assigned only linear combinations of linear variables"},
      {RoleId::Bool, InitKind::AllVars, CombineOp::SetMinus,
       EvalMode::FixedPoint, gen_bool,
       "holds only zero, one, or other boolean variables"},
      {RoleId::Input, InitKind::EmptySet, CombineOp::Union, EvalMode::OneRun,
       gen_input, "receives a value through a by-reference call argument"},
      {RoleId::Output, InitKind::EmptySet, CombineOp::Union, EvalMode::OneRun,
       gen_output, "printed via a printf-family call"},
      {RoleId::BranchCond, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_branch_cond,
       "occurs in the condition of an if statement"},
      {RoleId::Bitvector, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_bitvector,
       "operand or result of a bitwise operation"},
      {RoleId::UnresAssign, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_unres_assign,
       "assigned from an array element or pointer read"},
      {RoleId::Char, InitKind::EmptySet, CombineOp::Union,
       EvalMode::FixedPoint, gen_char,
       "holds character literals or results of character library calls"},
      {RoleId::LoopIt, InitKind::EmptySet, CombineOp::Union, EvalMode::OneRun,
       gen_loop_it, "tested in a loop condition and updated in the loop body"},
      {RoleId::FileDescr, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_file_descr,
       "returned by open() or passed first to read()/write()"},
      {RoleId::ArrayIndex, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_array_index, "used as an array subscript"},
      {RoleId::ArraySize, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_array_size,
       "passed to malloc() as the allocation size"},
      {RoleId::UsedInArithm, InitKind::EmptySet, CombineOp::Union,
       EvalMode::OneRun, gen_used_in_arithm,
       "operand of an arithmetic operation"},
  };
  return catalog;
}

std::vector<AnalysisSpec> catalog_subset(const std::vector<RoleId>& roles) {
  std::vector<AnalysisSpec> out;
  for (const AnalysisSpec& spec : full_catalog())
    if (std::find(roles.begin(), roles.end(), spec.role) != roles.end())
      out.push_back(spec);
  return out;
}

} // namespace rolescope
