#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace rolescope::testing {

using namespace rolescope;

namespace {

VarSet operator|(VarSet a, const VarSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

VarSet single(const Expr& e) {
  return e.kind == ExprKind::Var ? VarSet{e.var} : VarSet{};
}

bool literal(const Expr& e) { return e.kind == ExprKind::Num; }

// walk_stmt builds a per-role statement evaluator out of three pieces:
// what an assignment generates, what a call generates, and whether the
// if/while rules look at the condition.
struct Walk {
  std::function<VarSet(const Stmt&)> on_assign;      // Assign statements
  std::function<VarSet(const Stmt&)> on_array_assign;
  std::function<VarSet(const Stmt&)> on_call;
  std::function<VarSet(const BoolExpr&)> on_if_cond;    // may be null
  std::function<VarSet(const BoolExpr&)> on_while_cond; // may be null
  bool if_descends = true;
  bool while_descends = true;
  std::function<VarSet(const Stmt&)> on_while_whole; // overrides While

  VarSet run(const Stmt& s) const {
    switch (s.kind) {
      case StmtKind::Assign: return on_assign ? on_assign(s) : VarSet{};
      case StmtKind::ArrayAssign:
        return on_array_assign ? on_array_assign(s) : VarSet{};
      case StmtKind::Skip: return {};
      case StmtKind::Seq: return run(*s.s1) | run(*s.s2);
      case StmtKind::If: {
        VarSet out;
        if (on_if_cond) out = on_if_cond(*s.cond);
        if (if_descends) out = std::move(out) | run(*s.s1) | run(*s.s2);
        return out;
      }
      case StmtKind::While: {
        if (on_while_whole) return on_while_whole(s);
        VarSet out;
        if (on_while_cond) out = on_while_cond(*s.cond);
        if (while_descends) out = std::move(out) | run(*s.s1);
        return out;
      }
      case StmtKind::Call: return on_call ? on_call(s) : VarSet{};
    }
    return {};
  }
};

VarSet every_value_arg(const Stmt& call,
                       const std::function<VarSet(const Expr&)>& f) {
  VarSet out;
  for (const Arg& a : call.args) out = std::move(out) | f(*a.expr);
  return out;
}

// --- per-role expression walkers, re-derived from the equations ---

VarSet bv_e(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Bitop:
      return single(*e.lhs) | single(*e.rhs) | bv_e(*e.lhs) | bv_e(*e.rhs);
    case ExprKind::Bitnot: return single(*e.lhs) | bv_e(*e.lhs);
    case ExprKind::Aop: return bv_e(*e.lhs) | bv_e(*e.rhs);
    case ExprKind::ArrayRead: return bv_e(*e.lhs);
    default: return {};
  }
}

VarSet bv_b(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return bv_e(*b.lhs) | bv_e(*b.rhs);
    case BoolKind::Not: return bv_b(*b.b1);
    case BoolKind::Logop: return bv_b(*b.b1) | bv_b(*b.b2);
  }
  return {};
}

VarSet arith_e(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Aop:
      return single(*e.lhs) | single(*e.rhs) | arith_e(*e.lhs) |
             arith_e(*e.rhs);
    case ExprKind::Bitop: return arith_e(*e.lhs) | arith_e(*e.rhs);
    case ExprKind::Bitnot: return arith_e(*e.lhs);
    case ExprKind::ArrayRead: return arith_e(*e.lhs);
    default: return {};
  }
}

VarSet arith_b(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return arith_e(*b.lhs) | arith_e(*b.rhs);
    case BoolKind::Not: return arith_b(*b.b1);
    case BoolKind::Logop: return arith_b(*b.b1) | arith_b(*b.b2);
  }
  return {};
}

VarSet idx_e(const Expr& e) {
  switch (e.kind) {
    case ExprKind::ArrayRead: return single(*e.lhs);
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return idx_e(*e.lhs) | idx_e(*e.rhs);
    case ExprKind::Bitnot: return idx_e(*e.lhs);
    default: return {};
  }
}

VarSet idx_b(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return idx_e(*b.lhs) | idx_e(*b.rhs);
    case BoolKind::Not: return idx_b(*b.b1);
    case BoolKind::Logop: return idx_b(*b.b1) | idx_b(*b.b2);
  }
  return {};
}

VarSet cond_vars(const BoolExpr& b) { // every variable in the condition
  switch (b.kind) {
    case BoolKind::Comp: return all_vars(*b.lhs) | all_vars(*b.rhs);
    case BoolKind::Not: return cond_vars(*b.b1);
    case BoolKind::Logop: return cond_vars(*b.b1) | cond_vars(*b.b2);
  }
  return {};
}

VarSet comp_operand_vars(const BoolExpr& b) { // varsB
  switch (b.kind) {
    case BoolKind::Comp: return single(*b.lhs) | single(*b.rhs);
    case BoolKind::Not: return comp_operand_vars(*b.b1);
    case BoolKind::Logop:
      return comp_operand_vars(*b.b1) | comp_operand_vars(*b.b2);
  }
  return {};
}

VarSet targets(const Stmt& s) { // varsS
  switch (s.kind) {
    case StmtKind::Assign: return {s.target};
    case StmtKind::Seq:
    case StmtKind::If:
      return targets(*s.s1) | targets(*s.s2);
    case StmtKind::While: return targets(*s.s1);
    default: return {};
  }
}

bool lin_o(const Expr& e, const VarSet& res) {
  if (e.kind == ExprKind::Num) return true;
  if (e.kind == ExprKind::Var) return res.count(e.var) > 0;
  if (e.kind == ExprKind::Aop) {
    if (e.aop == AopKind::Add || e.aop == AopKind::Sub)
      return lin_o(*e.lhs, res) && lin_o(*e.rhs, res);
    if (e.aop == AopKind::Mul) {
      if (literal(*e.lhs)) return lin_o(*e.rhs, res);
      if (literal(*e.rhs)) return lin_o(*e.lhs, res);
      return false;
    }
  }
  return false; // division, bitwise forms, array reads
}

VarSet sumd_o(const Expr& e) {
  if (e.kind != ExprKind::Aop) return {};
  if (e.aop == AopKind::Add) {
    if (literal(*e.rhs)) return single(*e.lhs);
    if (literal(*e.lhs)) return single(*e.rhs);
  }
  if (e.aop == AopKind::Sub && literal(*e.rhs)) return single(*e.lhs);
  return {};
}

bool const_o(const Expr& e, const VarSet& res) {
  switch (e.kind) {
    case ExprKind::Num: return true;
    case ExprKind::Var: return res.count(e.var) > 0;
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return const_o(*e.lhs, res) && const_o(*e.rhs, res);
    case ExprKind::Bitnot: return const_o(*e.lhs, res);
    default: return false;
  }
}

bool bool_o(const Expr& e, const VarSet& res) {
  if (e.kind == ExprKind::Num)
    return e.num.kind == NumKind::Int &&
           (e.num.value == 0 || e.num.value == 1);
  if (e.kind == ExprKind::Var) return res.count(e.var) > 0;
  return false;
}

VarSet bool_ops_e(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Aop:
    case ExprKind::Bitop:
      return single(*e.lhs) | single(*e.rhs);
    case ExprKind::Bitnot: return single(*e.lhs);
    case ExprKind::ArrayRead: return bool_ops_e(*e.lhs);
    default: return {};
  }
}

VarSet bool_ops_b(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return bool_ops_e(*b.lhs) | bool_ops_e(*b.rhs);
    case BoolKind::Not: return bool_ops_b(*b.b1);
    case BoolKind::Logop: return bool_ops_b(*b.b1) | bool_ops_b(*b.b2);
  }
  return {};
}

bool char_o(const Expr& e, const VarSet& res) {
  if (e.kind == ExprKind::Num) return e.num.kind == NumKind::Char;
  if (e.kind == ExprKind::Var) return res.count(e.var) > 0;
  return false;
}

bool is_one_of(const std::string& p, std::initializer_list<const char*> set) {
  for (const char* s : set)
    if (p == s) return true;
  return false;
}

VarSet char_call(const Stmt& s) {
  const std::string& p = s.proc;
  const size_t n = s.args.size();
  auto at = [&](size_t i) { return single(*s.args[i - 1].expr); };
  VarSet out;
  if ((n == 1 && p == "getchar") ||
      (n == 2 && is_one_of(p, {"getc", "fgetc", "tolower", "toupper"})))
    out = std::move(out) | at(1);
  if (n == 2 &&
      is_one_of(p, {"putchar", "tolower", "toupper", "isalnum", "isblank",
                    "iscntrl", "isdigit", "isgraph", "islower", "isprint",
                    "ispunct", "isspace", "isupper", "isxdigit"}))
    out = std::move(out) | at(2);
  return out;
}

VarSet fd_call(const Stmt& s) {
  const std::string& p = s.proc;
  const size_t n = s.args.size();
  if (p == "open" && n >= 3 && n <= 4) return single(*s.args[0].expr);
  if ((p == "read" || p == "write") && n == 4) return single(*s.args[1].expr);
  return {};
}

VarSet size_call(const Stmt& s) {
  if (s.proc == "malloc" && s.args.size() == 2)
    return single(*s.args[1].expr);
  return {};
}

VarSet out_call(const Stmt& s) {
  const size_t n = s.args.size();
  size_t from = 0;
  if (s.proc == "printf") from = 2;
  if (s.proc == "sprintf" || s.proc == "fprintf") from = 3;
  VarSet out;
  if (from > 0)
    for (size_t i = from; i <= n; ++i)
      out = std::move(out) | single(*s.args[i - 1].expr);
  return out;
}

} // namespace

VarSet oracle_gen(RoleId role, const Stmt& s, const VarSet& res) {
  Walk w;
  switch (role) {
    case RoleId::SyntConst:
      w.on_assign = [](const Stmt& a) { return VarSet{a.target}; };
      break;
    case RoleId::ConstAssign:
      w.on_assign = [&res](const Stmt& a) -> VarSet {
        if (a.value->kind == ExprKind::ArrayRead) return {};
        if (const_o(*a.value, res)) return {};
        return {a.target};
      };
      break;
    case RoleId::Counter:
      w.on_assign = [](const Stmt& a) -> VarSet {
        if (literal(*a.value) && a.value->num.is_zero()) return {};
        if (a.value->kind == ExprKind::ArrayRead) return {};
        VarSet out{a.target};
        for (const VarName& v : sumd_o(*a.value)) out.erase(v);
        return out;
      };
      break;
    case RoleId::Linear:
      w.on_assign = [&res](const Stmt& a) -> VarSet {
        if (a.value->kind == ExprKind::ArrayRead) return {};
        return lin_o(*a.value, res) ? VarSet{} : VarSet{a.target};
      };
      break;
    case RoleId::Bool:
      w.on_assign = [&res](const Stmt& a) -> VarSet {
        VarSet out = bool_ops_e(*a.value);
        if (a.value->kind == ExprKind::ArrayRead) return out;
        if (!bool_o(*a.value, res)) out.insert(a.target);
        return out;
      };
      w.on_array_assign = [](const Stmt& a) {
        return bool_ops_e(*a.index) | bool_ops_e(*a.value);
      };
      w.on_call = [](const Stmt& c) {
        return every_value_arg(c, bool_ops_e);
      };
      w.on_if_cond = bool_ops_b;
      w.on_while_cond = bool_ops_b;
      break;
    case RoleId::Input:
      w.on_call = [](const Stmt& c) {
        VarSet out;
        for (const Arg& a : c.args)
          if (a.mode == ArgMode::Ref) out = std::move(out) | single(*a.expr);
        return out;
      };
      break;
    case RoleId::Output:
      w.on_call = out_call;
      break;
    case RoleId::BranchCond:
      w.on_if_cond = cond_vars;
      w.if_descends = false;
      break;
    case RoleId::Bitvector:
      w.on_assign = [](const Stmt& a) {
        VarSet out = bv_e(*a.value);
        if (a.value->kind == ExprKind::Bitop) out.insert(a.target);
        return out;
      };
      w.on_array_assign = [](const Stmt& a) {
        return bv_e(*a.index) | bv_e(*a.value);
      };
      w.on_call = [](const Stmt& c) { return every_value_arg(c, bv_e); };
      w.on_if_cond = bv_b;
      w.on_while_cond = bv_b;
      break;
    case RoleId::UnresAssign:
      w.on_assign = [](const Stmt& a) -> VarSet {
        if (a.value->kind == ExprKind::ArrayRead) return {a.target};
        return {};
      };
      break;
    case RoleId::Char:
      w.on_assign = [&res](const Stmt& a) -> VarSet {
        return char_o(*a.value, res) ? VarSet{a.target} : VarSet{};
      };
      w.on_call = char_call;
      break;
    case RoleId::LoopIt:
      w.on_while_whole = [](const Stmt& loop) {
        VarSet in_cond = comp_operand_vars(*loop.cond);
        VarSet assigned = targets(*loop.s1);
        VarSet out;
        for (const VarName& v : in_cond)
          if (assigned.count(v)) out.insert(v);
        return out;
      };
      break;
    case RoleId::FileDescr:
      w.on_call = fd_call;
      break;
    case RoleId::ArrayIndex:
      w.on_assign = [](const Stmt& a) { return idx_e(*a.value); };
      w.on_array_assign = [](const Stmt& a) {
        return single(*a.index) | idx_e(*a.value);
      };
      w.on_call = [](const Stmt& c) { return every_value_arg(c, idx_e); };
      w.on_if_cond = idx_b;
      w.on_while_cond = idx_b;
      break;
    case RoleId::ArraySize:
      w.on_call = size_call;
      break;
    case RoleId::UsedInArithm:
      w.on_assign = [](const Stmt& a) { return arith_e(*a.value); };
      w.on_array_assign = [](const Stmt& a) {
        return arith_e(*a.index) | arith_e(*a.value);
      };
      w.on_call = [](const Stmt& c) { return every_value_arg(c, arith_e); };
      w.on_if_cond = arith_b;
      w.on_while_cond = arith_b;
      break;
  }
  return w.run(s);
}

namespace {

bool is_negative_role(RoleId role) {
  return role == RoleId::SyntConst || role == RoleId::ConstAssign ||
         role == RoleId::Counter || role == RoleId::Linear ||
         role == RoleId::Bool;
}

bool is_fixpoint_role(RoleId role) {
  return role == RoleId::ConstAssign || role == RoleId::Counter ||
         role == RoleId::Linear || role == RoleId::Bool ||
         role == RoleId::Char;
}

} // namespace

VarSet oracle_result(RoleId role, const Function& f) {
  const VarSet vars = declared_vars(f);
  const bool negative = is_negative_role(role);
  const VarSet init = negative ? vars : VarSet{};

  auto apply = [&](const VarSet& res) {
    VarSet generated = oracle_gen(role, *f.body, res);
    VarSet out;
    if (negative) {
      for (const VarName& v : init)
        if (!generated.count(v)) out.insert(v);
    } else {
      out = init;
      out.insert(generated.begin(), generated.end());
    }
    return out;
  };

  if (!is_fixpoint_role(role)) return apply(init);

  // Enumerate candidate subsets; the solutions of Res = Init |_| gen(Res)
  // form a lattice for monotone gen, so take the extremal one.
  std::vector<VarName> order(vars.begin(), vars.end());
  const size_t n = order.size();
  std::vector<VarSet> fixpoints;
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    VarSet candidate;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) candidate.insert(order[i]);
    if (apply(candidate) == candidate) fixpoints.push_back(candidate);
  }
  if (fixpoints.empty())
    throw std::logic_error("no fixpoint for " + std::string(role_name(role)));

  auto contains = [](const VarSet& big, const VarSet& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  for (const VarSet& candidate : fixpoints) {
    bool extremal = true;
    for (const VarSet& other : fixpoints) {
      const bool ok =
          negative ? contains(candidate, other) : contains(other, candidate);
      if (!ok) {
        extremal = false;
        break;
      }
    }
    if (extremal) return candidate;
  }
  throw std::logic_error("no extremal fixpoint for " +
                         std::string(role_name(role)));
}

} // namespace rolescope::testing
