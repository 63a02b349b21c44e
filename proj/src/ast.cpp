#include "rolescope/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace rolescope {

NumLit int_lit(long long v) {
  NumLit n;
  n.kind = NumKind::Int;
  n.text = std::to_string(v);
  n.value = static_cast<double>(v);
  return n;
}

NumLit float_lit(double v, std::string text) {
  NumLit n;
  n.kind = NumKind::Float;
  n.text = std::move(text);
  n.value = v;
  return n;
}

NumLit char_lit(char c) {
  NumLit n;
  n.kind = NumKind::Char;
  switch (c) {
    case '\n': n.text = "'\\n'"; break;
    case '\t': n.text = "'\\t'"; break;
    case '\0': n.text = "'\\0'"; break;
    case '\\': n.text = "'\\\\'"; break;
    case '\'': n.text = "'\\''"; break;
    default: n.text = std::string("'") + c + "'"; break;
  }
  n.value = static_cast<double>(static_cast<unsigned char>(c));
  return n;
}

ExprPtr make_var(VarName v) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Var;
  e->var = std::move(v);
  return e;
}

ExprPtr make_num(NumLit n) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Num;
  e->num = std::move(n);
  return e;
}

ExprPtr make_aop(AopKind op, ExprPtr l, ExprPtr r) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Aop;
  e->aop = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr make_bitop(BitopKind op, ExprPtr l, ExprPtr r) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Bitop;
  e->bitop = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr make_bitnot(ExprPtr inner) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Bitnot;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr make_array_read(VarName array, ExprPtr index) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::ArrayRead;
  e->var = std::move(array);
  e->lhs = std::move(index);
  return e;
}

BoolPtr make_comp(CompKind op, ExprPtr l, ExprPtr r) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolKind::Comp;
  b->comp = op;
  b->lhs = std::move(l);
  b->rhs = std::move(r);
  return b;
}

BoolPtr make_not(BoolPtr inner) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolKind::Not;
  b->b1 = std::move(inner);
  return b;
}

BoolPtr make_logop(LogopKind op, BoolPtr l, BoolPtr r) {
  auto b = std::make_unique<BoolExpr>();
  b->kind = BoolKind::Logop;
  b->logop = op;
  b->b1 = std::move(l);
  b->b2 = std::move(r);
  return b;
}

Arg value_arg(ExprPtr e) {
  Arg a;
  a.mode = ArgMode::Value;
  a.expr = std::move(e);
  return a;
}

Arg ref_arg(VarName v) {
  Arg a;
  a.mode = ArgMode::Ref;
  a.expr = make_var(std::move(v));
  return a;
}

StmtPtr make_assign(VarName lhs, ExprPtr rhs) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::Assign;
  s->target = std::move(lhs);
  s->value = std::move(rhs);
  return s;
}

StmtPtr make_array_assign(VarName array, ExprPtr index, ExprPtr rhs) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::ArrayAssign;
  s->target = std::move(array);
  s->index = std::move(index);
  s->value = std::move(rhs);
  return s;
}

StmtPtr make_if(BoolPtr cond, StmtPtr then_s, StmtPtr else_s) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::If;
  s->cond = std::move(cond);
  s->s1 = std::move(then_s);
  s->s2 = std::move(else_s);
  return s;
}

StmtPtr make_skip() {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::Skip;
  return s;
}

StmtPtr make_while(BoolPtr cond, StmtPtr body) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::While;
  s->cond = std::move(cond);
  s->s1 = std::move(body);
  return s;
}

StmtPtr make_call(std::string proc, std::vector<Arg> args) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::Call;
  s->proc = std::move(proc);
  s->args = std::move(args);
  return s;
}

StmtPtr make_seq(StmtPtr first, StmtPtr second) {
  auto s = std::make_unique<Stmt>();
  s->kind = StmtKind::Seq;
  s->s1 = std::move(first);
  s->s2 = std::move(second);
  return s;
}

StmtPtr seq_of(std::vector<StmtPtr> stmts) {
  if (stmts.empty()) return make_skip();
  StmtPtr acc = std::move(stmts.back());
  stmts.pop_back();
  while (!stmts.empty()) {
    acc = make_seq(std::move(stmts.back()), std::move(acc));
    stmts.pop_back();
  }
  return acc;
}

VarSet is_var(const Expr& e) {
  if (e.kind == ExprKind::Var) return {e.var};
  return {};
}

VarSet is_var(const BoolExpr&) { return {}; }
VarSet is_var(const Stmt&) { return {}; }

VarSet declared_vars(const Function& f) {
  VarSet out(f.params.begin(), f.params.end());
  out.insert(f.locals.begin(), f.locals.end());
  return out;
}

namespace {

void merge(VarSet& into, VarSet from) {
  into.merge(from);
}

} // namespace

VarSet all_vars(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var: return {e.var};
    case ExprKind::Num: return {};
    case ExprKind::Aop:
    case ExprKind::Bitop: {
      VarSet out = all_vars(*e.lhs);
      merge(out, all_vars(*e.rhs));
      return out;
    }
    case ExprKind::Bitnot: return all_vars(*e.lhs);
    case ExprKind::ArrayRead: return all_vars(*e.lhs);
  }
  return {};
}

VarSet all_vars(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: {
      VarSet out = all_vars(*b.lhs);
      merge(out, all_vars(*b.rhs));
      return out;
    }
    case BoolKind::Not: return all_vars(*b.b1);
    case BoolKind::Logop: {
      VarSet out = all_vars(*b.b1);
      merge(out, all_vars(*b.b2));
      return out;
    }
  }
  return {};
}

VarSet all_vars(const Stmt& s) {
  VarSet out;
  switch (s.kind) {
    case StmtKind::Assign:
      out.insert(s.target);
      merge(out, all_vars(*s.value));
      break;
    case StmtKind::ArrayAssign:
      merge(out, all_vars(*s.index));
      merge(out, all_vars(*s.value));
      break;
    case StmtKind::If:
      merge(out, all_vars(*s.cond));
      merge(out, all_vars(*s.s1));
      merge(out, all_vars(*s.s2));
      break;
    case StmtKind::Seq:
      merge(out, all_vars(*s.s1));
      merge(out, all_vars(*s.s2));
      break;
    case StmtKind::Skip:
      break;
    case StmtKind::While:
      merge(out, all_vars(*s.cond));
      merge(out, all_vars(*s.s1));
      break;
    case StmtKind::Call:
      for (const Arg& a : s.args) merge(out, all_vars(*a.expr));
      break;
  }
  return out;
}

ExprPtr clone(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var: return make_var(e.var);
    case ExprKind::Num: return make_num(e.num);
    case ExprKind::Aop: return make_aop(e.aop, clone(*e.lhs), clone(*e.rhs));
    case ExprKind::Bitop: return make_bitop(e.bitop, clone(*e.lhs), clone(*e.rhs));
    case ExprKind::Bitnot: return make_bitnot(clone(*e.lhs));
    case ExprKind::ArrayRead: return make_array_read(e.var, clone(*e.lhs));
  }
  throw std::logic_error("clone: bad ExprKind");
}

BoolPtr clone(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Comp: return make_comp(b.comp, clone(*b.lhs), clone(*b.rhs));
    case BoolKind::Not: return make_not(clone(*b.b1));
    case BoolKind::Logop: return make_logop(b.logop, clone(*b.b1), clone(*b.b2));
  }
  throw std::logic_error("clone: bad BoolKind");
}

StmtPtr clone(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Assign: return make_assign(s.target, clone(*s.value));
    case StmtKind::ArrayAssign:
      return make_array_assign(s.target, clone(*s.index), clone(*s.value));
    case StmtKind::If:
      return make_if(clone(*s.cond), clone(*s.s1), clone(*s.s2));
    case StmtKind::Seq: return make_seq(clone(*s.s1), clone(*s.s2));
    case StmtKind::Skip: return make_skip();
    case StmtKind::While: return make_while(clone(*s.cond), clone(*s.s1));
    case StmtKind::Call: {
      std::vector<Arg> args;
      args.reserve(s.args.size());
      for (const Arg& a : s.args) {
        Arg c;
        c.mode = a.mode;
        c.expr = clone(*a.expr);
        args.push_back(std::move(c));
      }
      return make_call(s.proc, std::move(args));
    }
  }
  throw std::logic_error("clone: bad StmtKind");
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Var: return a.var == b.var;
    case ExprKind::Num: return a.num == b.num;
    case ExprKind::Aop:
      return a.aop == b.aop && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case ExprKind::Bitop:
      return a.bitop == b.bitop && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case ExprKind::Bitnot: return equal(*a.lhs, *b.lhs);
    case ExprKind::ArrayRead: return a.var == b.var && equal(*a.lhs, *b.lhs);
  }
  return false;
}

bool equal(const BoolExpr& a, const BoolExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BoolKind::Comp:
      return a.comp == b.comp && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case BoolKind::Not: return equal(*a.b1, *b.b1);
    case BoolKind::Logop:
      return a.logop == b.logop && equal(*a.b1, *b.b1) && equal(*a.b2, *b.b2);
  }
  return false;
}

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case StmtKind::Assign:
      return a.target == b.target && equal(*a.value, *b.value);
    case StmtKind::ArrayAssign:
      return a.target == b.target && equal(*a.index, *b.index) &&
             equal(*a.value, *b.value);
    case StmtKind::If:
      return equal(*a.cond, *b.cond) && equal(*a.s1, *b.s1) && equal(*a.s2, *b.s2);
    case StmtKind::Seq:
      return equal(*a.s1, *b.s1) && equal(*a.s2, *b.s2);
    case StmtKind::Skip: return true;
    case StmtKind::While:
      return equal(*a.cond, *b.cond) && equal(*a.s1, *b.s1);
    case StmtKind::Call: {
      if (a.proc != b.proc || a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i].mode != b.args[i].mode) return false;
        if (!equal(*a.args[i].expr, *b.args[i].expr)) return false;
      }
      return true;
    }
  }
  return false;
}

bool equal(const Function& a, const Function& b) {
  return a.name == b.name && a.params == b.params && a.locals == b.locals &&
         equal(*a.body, *b.body);
}

bool equal(const Program& a, const Program& b) {
  if (a.functions.size() != b.functions.size()) return false;
  for (size_t i = 0; i < a.functions.size(); ++i)
    if (!equal(a.functions[i], b.functions[i])) return false;
  return true;
}

namespace {

void label_stmt(Stmt& s, int& next) {
  s.label = next++;
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Seq:
      label_stmt(*s.s1, next);
      label_stmt(*s.s2, next);
      break;
    case StmtKind::While:
      label_stmt(*s.s1, next);
      break;
    default:
      break;
  }
}

} // namespace

void assign_labels(Function& f) {
  int next = 1;
  if (f.body) label_stmt(*f.body, next);
}

void assign_labels(Program& p) {
  for (Function& f : p.functions) assign_labels(f);
}

namespace {

void check_stmt(const Stmt& s, const VarSet& declared, const std::string& fn,
                std::vector<std::string>& out) {
  auto check_used = [&](const VarSet& used) {
    for (const VarName& v : used) {
      if (!declared.contains(v))
        out.push_back("function " + fn + ": undeclared variable '" + v.name +
                      "' (statement " + std::to_string(s.label) + ")");
    }
  };
  switch (s.kind) {
    case StmtKind::Assign:
      check_used({s.target});
      check_used(all_vars(*s.value));
      break;
    case StmtKind::ArrayAssign:
      check_used(all_vars(*s.index));
      check_used(all_vars(*s.value));
      break;
    case StmtKind::If:
      check_used(all_vars(*s.cond));
      check_stmt(*s.s1, declared, fn, out);
      check_stmt(*s.s2, declared, fn, out);
      break;
    case StmtKind::Seq:
      check_stmt(*s.s1, declared, fn, out);
      check_stmt(*s.s2, declared, fn, out);
      break;
    case StmtKind::Skip:
      break;
    case StmtKind::While:
      check_used(all_vars(*s.cond));
      check_stmt(*s.s1, declared, fn, out);
      break;
    case StmtKind::Call:
      for (const Arg& a : s.args) {
        if (a.mode == ArgMode::Ref && a.expr->kind != ExprKind::Var)
          out.push_back("function " + fn +
                        ": ref argument is not a bare variable (statement " +
                        std::to_string(s.label) + ")");
        check_used(all_vars(*a.expr));
      }
      break;
  }
}

} // namespace

std::vector<std::string> validate(const Program& p) {
  std::vector<std::string> out;
  std::set<std::string> fnames;
  for (const Function& f : p.functions) {
    if (!fnames.insert(f.name).second)
      out.push_back("duplicate function name '" + f.name + "'");
    VarSet declared;
    for (const VarName& v : f.params) {
      if (!declared.insert(v).second)
        out.push_back("function " + f.name + ": duplicate declaration of '" +
                      v.name + "'");
    }
    for (const VarName& v : f.locals) {
      if (!declared.insert(v).second)
        out.push_back("function " + f.name + ": duplicate declaration of '" +
                      v.name + "'");
    }
    if (f.body) check_stmt(*f.body, declared, f.name, out);
  }
  return out;
}

} // namespace rolescope
