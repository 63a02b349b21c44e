#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

// Abstract syntax for the analyzed mini-language: scalar expressions,
// stratified boolean expressions, statements, functions, programs.
// All nodes are immutable after construction; analyses share them freely.

namespace rolescope {

struct VarName {
  std::string name;

  VarName() = default;
  VarName(std::string n) : name(std::move(n)) {}
  VarName(const char* n) : name(n) {}

  auto operator<=>(const VarName&) const = default;
};

using VarSet = std::set<VarName>;

enum class NumKind { Int, Float, Char };

// A scalar literal. `text` keeps the exact source spelling so printing is
// lossless; char literals store the code point in `value`.
struct NumLit {
  NumKind kind = NumKind::Int;
  std::string text = "0";
  double value = 0.0;

  bool is_zero() const { return kind == NumKind::Int && value == 0.0; }
  bool operator==(const NumLit&) const = default;
};

NumLit int_lit(long long v);
NumLit float_lit(double v, std::string text);
NumLit char_lit(char c);

enum class ExprKind { Var, Num, Aop, Bitop, Bitnot, ArrayRead };
enum class AopKind { Add, Sub, Mul, Div };
enum class BitopKind { Or, And, Xor };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Num;
  VarName var;      // Var: the variable; ArrayRead: the array name
  NumLit num;       // Num
  AopKind aop{};    // Aop
  BitopKind bitop{};// Bitop
  ExprPtr lhs;      // Aop/Bitop left; Bitnot operand; ArrayRead index
  ExprPtr rhs;      // Aop/Bitop right
};

ExprPtr make_var(VarName v);
ExprPtr make_num(NumLit n);
ExprPtr make_aop(AopKind op, ExprPtr l, ExprPtr r);
ExprPtr make_bitop(BitopKind op, ExprPtr l, ExprPtr r);
ExprPtr make_bitnot(ExprPtr e);
ExprPtr make_array_read(VarName array, ExprPtr index);

enum class BoolKind { Comp, Not, Logop };
enum class CompKind { Eq, Ne, Gt, Lt, Ge, Le };
enum class LogopKind { And, Or };

struct BoolExpr;
using BoolPtr = std::unique_ptr<BoolExpr>;

// Boolean and arithmetic grammars are disjoint: an Expr is never a
// BoolExpr and conditions always bottom out in comparisons.
struct BoolExpr {
  BoolKind kind = BoolKind::Comp;
  CompKind comp{};
  LogopKind logop{};
  ExprPtr lhs, rhs; // Comp operands
  BoolPtr b1, b2;   // Not operand in b1; Logop operands
};

BoolPtr make_comp(CompKind op, ExprPtr l, ExprPtr r);
BoolPtr make_not(BoolPtr b);
BoolPtr make_logop(LogopKind op, BoolPtr l, BoolPtr r);

enum class ArgMode { Value, Ref };

// Call argument. mode == Ref requires expr to be a bare variable.
struct Arg {
  ArgMode mode = ArgMode::Value;
  ExprPtr expr;
};

Arg value_arg(ExprPtr e);
Arg ref_arg(VarName v);

enum class StmtKind { Assign, ArrayAssign, If, Seq, Skip, While, Call };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Skip;
  int label = 0;    // unique within a function, pre-order from 1
  VarName target;   // Assign lhs; ArrayAssign array name
  ExprPtr index;    // ArrayAssign subscript
  ExprPtr value;    // Assign/ArrayAssign rhs
  BoolPtr cond;     // If/While
  StmtPtr s1;       // Seq first; If then-branch; While body
  StmtPtr s2;       // Seq second; If else-branch
  std::string proc; // Call target name
  std::vector<Arg> args;
};

StmtPtr make_assign(VarName lhs, ExprPtr rhs);
StmtPtr make_array_assign(VarName array, ExprPtr index, ExprPtr rhs);
StmtPtr make_if(BoolPtr cond, StmtPtr then_s, StmtPtr else_s);
StmtPtr make_skip();
StmtPtr make_while(BoolPtr cond, StmtPtr body);
StmtPtr make_call(std::string proc, std::vector<Arg> args);
StmtPtr make_seq(StmtPtr first, StmtPtr second);

// Right-folds a statement list into nested Seq nodes; empty list -> Skip.
StmtPtr seq_of(std::vector<StmtPtr> stmts);

// Note: params[0], when present, is the slot a call writes its result to.
struct Function {
  std::string name;
  std::vector<VarName> params;
  std::vector<VarName> locals;
  StmtPtr body;
};

struct Program {
  std::vector<Function> functions;
};

// The variable set of a bare variable expression; empty for every other
// expression, boolean expression, and statement.
VarSet is_var(const Expr& e);
VarSet is_var(const BoolExpr& b);
VarSet is_var(const Stmt& s);

// params U locals; the AllVars initial set of the analyses.
VarSet declared_vars(const Function& f);

// Every scalar variable occurring in the term (array names excluded --
// they live in their own namespace and carry no roles).
VarSet all_vars(const Expr& e);
VarSet all_vars(const BoolExpr& b);
VarSet all_vars(const Stmt& s);

ExprPtr clone(const Expr& e);
BoolPtr clone(const BoolExpr& b);
StmtPtr clone(const Stmt& s);

// Structural equality; statement labels are metadata and ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const BoolExpr& a, const BoolExpr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const Function& a, const Function& b);
bool equal(const Program& a, const Program& b);

// Relabels statements pre-order starting at 1, per function.
void assign_labels(Function& f);
void assign_labels(Program& p);

// Well-formedness: unique function names, unique declarations per
// function, every used variable declared, ref arguments are bare vars.
// Returns one message per violation; empty means valid.
std::vector<std::string> validate(const Program& p);

} // namespace rolescope
