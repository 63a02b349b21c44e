#include "rolescope/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace rolescope {

ParseError::ParseError(int line_, int column_, std::string expected_,
                       std::string found_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(column_) + ": expected " + expected_ +
                         ", found '" + found_ + "'"),
      line(line_), column(column_), expected(std::move(expected_)),
      found(std::move(found_)) {}

namespace {

enum class Tok {
  Ident, Keyword, Int, Float, CharLit,
  Assign,                      // :=
  Eq, Ne, Lt, Gt, Le, Ge,      // comparisons
  Plus, Minus, Star, Slash,
  Semi, Comma, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0; // Int/Float/CharLit
  int line = 1;
  int col = 1;
};

const std::set<std::string> kKeywords = {
    "begin", "end", "proc", "var", "skip", "if", "then", "else", "while",
    "do", "call", "ref", "bitand", "bitor", "bitxor", "bitnot", "and",
    "or", "not"};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  const size_t n = src.size();

  auto advance = [&](size_t count) {
    for (size_t k = 0; k < count && i < n; ++k, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  auto tok = [&](Tok kind, std::string text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };

  while (i < n) {
    char ch = src[i];
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      const Tok kind = kKeywords.contains(word) ? Tok::Keyword : Tok::Ident;
      tok(kind, std::move(word), l, c);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      bool is_float = false;
      if (j + 1 < n && src[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        is_float = true;
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      std::string text = src.substr(i, j - i);
      advance(j - i);
      Token t;
      t.kind = is_float ? Tok::Float : Tok::Int;
      t.text = text;
      t.value = std::stod(text);
      t.line = l;
      t.col = c;
      out.push_back(std::move(t));
      continue;
    }
    if (ch == '\'') {
      size_t j = i + 1;
      char value;
      if (j < n && src[j] == '\\') {
        if (j + 1 >= n)
          throw ParseError(l, c, "character escape", "end of input");
        switch (src[j + 1]) {
          case 'n': value = '\n'; break;
          case 't': value = '\t'; break;
          case '0': value = '\0'; break;
          case '\\': value = '\\'; break;
          case '\'': value = '\''; break;
          default:
            throw ParseError(l, c, "character escape",
                             std::string("\\") + src[j + 1]);
        }
        j += 2;
      } else if (j < n && src[j] != '\'' && src[j] != '\n') {
        value = src[j];
        ++j;
      } else {
        throw ParseError(l, c, "character literal", "'");
      }
      if (j >= n || src[j] != '\'')
        throw ParseError(l, c, "closing ' of character literal",
                         j < n ? std::string(1, src[j]) : "end of input");
      ++j;
      std::string text = src.substr(i, j - i);
      advance(j - i);
      Token t;
      t.kind = Tok::CharLit;
      t.text = text;
      t.value = static_cast<double>(static_cast<unsigned char>(value));
      t.line = l;
      t.col = c;
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) {
      return ch == a && i + 1 < n && src[i + 1] == b;
    };
    if (two(':', '=')) { advance(2); tok(Tok::Assign, ":=", l, c); continue; }
    if (two('!', '=')) { advance(2); tok(Tok::Ne, "!=", l, c); continue; }
    if (two('<', '=')) { advance(2); tok(Tok::Le, "<=", l, c); continue; }
    if (two('>', '=')) { advance(2); tok(Tok::Ge, ">=", l, c); continue; }
    Tok kind;
    switch (ch) {
      case '=': kind = Tok::Eq; break;
      case '<': kind = Tok::Lt; break;
      case '>': kind = Tok::Gt; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case ';': kind = Tok::Semi; break;
      case ',': kind = Tok::Comma; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      default:
        throw ParseError(l, c, "a token", std::string(1, ch));
    }
    advance(1);
    tok(kind, std::string(1, ch), l, c);
  }
  tok(Tok::End, "end of input", line, col);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    expect_keyword("begin");
    // Program-level declarations are grammatical but carry no roles;
    // analysis is per function, so they are accepted and dropped.
    while (at_keyword("var")) var_decl(nullptr);
    while (at_keyword("proc")) p.functions.push_back(procedure());
    expect_keyword("end");
    if (peek().kind != Tok::End) fail("end of input");
    assign_labels(p);
    return p;
  }

 private:
  static constexpr int kMaxNesting = 256;

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int depth_ = 0;
  VarSet declared_; // of the function being parsed

  // Recursion guard: rejects pathologically nested input before the call
  // stack runs out.
  struct Nesting {
    Parser& parser;
    explicit Nesting(Parser& p) : parser(p) {
      if (parser.depth_ >= kMaxNesting) parser.fail("shallower nesting");
      ++parser.depth_;
    }
    ~Nesting() { --parser.depth_; }
  };

  const Token& peek(size_t ahead = 0) const {
    const size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.col, expected, t.text);
  }
  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Keyword && peek().text == kw;
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
    next();
  }
  bool eat_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    next();
    return true;
  }
  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(what);
    return next();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail(what);
    return next().text;
  }

  void var_decl(std::vector<VarName>* into) {
    expect_keyword("var");
    for (;;) {
      const Token& t = peek();
      std::string name = ident("variable name");
      if (into) {
        if (!declared_.insert(VarName(name)).second)
          throw ParseError(t.line, t.col, "a fresh variable name", name);
        into->push_back(VarName(name));
      }
      if (peek().kind != Tok::Comma) break;
      next();
    }
    expect(Tok::Semi, "';' after declaration");
  }

  void check_declared(const Token& t) {
    if (!declared_.contains(VarName(t.text)))
      throw ParseError(t.line, t.col, "a declared variable", t.text);
  }

  Function procedure() {
    Function f;
    expect_keyword("proc");
    f.name = ident("procedure name");
    declared_.clear();
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      for (;;) {
        const Token& t = peek();
        std::string name = ident("parameter name");
        if (!declared_.insert(VarName(name)).second)
          throw ParseError(t.line, t.col, "a fresh parameter name", name);
        f.params.push_back(VarName(name));
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen, "')'");
    expect_keyword("begin");
    while (at_keyword("var")) var_decl(&f.locals);
    f.body = stmt_list_until({"end"});
    expect_keyword("end");
    return f;
  }

  bool at_terminator(const std::vector<std::string_view>& terms) const {
    if (peek().kind == Tok::RBrace) return true;
    if (peek().kind == Tok::End) return true;
    for (auto t : terms)
      if (at_keyword(t)) return true;
    return false;
  }

  StmtPtr stmt_list_until(const std::vector<std::string_view>& terms) {
    std::vector<StmtPtr> stmts;
    while (!at_terminator(terms)) {
      stmts.push_back(statement());
      while (peek().kind == Tok::Semi) next();
    }
    return seq_of(std::move(stmts));
  }

  StmtPtr statement() {
    Nesting guard(*this);
    if (eat_keyword("skip")) return make_skip();
    if (at_keyword("if")) return if_stmt();
    if (at_keyword("while")) return while_stmt();
    if (at_keyword("call")) return call_stmt();
    if (peek().kind == Tok::LBrace) {
      next();
      StmtPtr body = stmt_list_until({});
      expect(Tok::RBrace, "'}'");
      return body;
    }
    if (at_keyword("begin")) {
      next();
      StmtPtr body = stmt_list_until({"end"});
      expect_keyword("end");
      return body;
    }
    if (peek().kind == Tok::Ident) return assignment();
    fail("a statement");
  }

  StmtPtr if_stmt() {
    expect_keyword("if");
    expect(Tok::LParen, "'(' before condition");
    BoolPtr cond = bool_expr();
    expect(Tok::RParen, "')' after condition");
    eat_keyword("then");
    StmtPtr then_s = statement();
    while (peek().kind == Tok::Semi && peek(1).kind == Tok::Keyword &&
           peek(1).text == "else")
      next();
    StmtPtr else_s = eat_keyword("else") ? statement() : make_skip();
    return make_if(std::move(cond), std::move(then_s), std::move(else_s));
  }

  StmtPtr while_stmt() {
    expect_keyword("while");
    expect(Tok::LParen, "'(' before condition");
    BoolPtr cond = bool_expr();
    expect(Tok::RParen, "')' after condition");
    eat_keyword("do");
    return make_while(std::move(cond), statement());
  }

  StmtPtr call_stmt() {
    expect_keyword("call");
    std::string proc = ident("procedure name");
    expect(Tok::LParen, "'('");
    std::vector<Arg> args;
    if (peek().kind != Tok::RParen) {
      for (;;) {
        if (eat_keyword("ref")) {
          const Token& t = peek();
          std::string name = ident("variable name after 'ref'");
          check_declared(t);
          args.push_back(ref_arg(VarName(name)));
        } else {
          args.push_back(value_arg(expr()));
        }
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen, "')'");
    return make_call(std::move(proc), std::move(args));
  }

  StmtPtr assignment() {
    const Token& t = peek();
    std::string name = ident("variable name");
    if (peek().kind == Tok::LBracket) {
      next();
      ExprPtr index = expr();
      expect(Tok::RBracket, "']'");
      expect(Tok::Assign, "':='");
      return make_array_assign(VarName(name), std::move(index), expr());
    }
    check_declared(t);
    expect(Tok::Assign, "':=' or '['");
    return make_assign(VarName(name), expr());
  }

  // Boolean grammar: or < and < (not | parens | comparison).
  BoolPtr bool_expr() {
    BoolPtr b = bool_and();
    while (eat_keyword("or")) b = make_logop(LogopKind::Or, std::move(b), bool_and());
    return b;
  }

  BoolPtr bool_and() {
    BoolPtr b = bool_atom();
    while (eat_keyword("and"))
      b = make_logop(LogopKind::And, std::move(b), bool_atom());
    return b;
  }

  BoolPtr bool_atom() {
    Nesting guard(*this);
    if (eat_keyword("not")) return make_not(bool_atom());
    if (peek().kind == Tok::LParen) {
      // "(" may open a boolean group or a parenthesized operand of a
      // comparison; try the boolean reading first and fall back.
      const size_t save = pos_;
      try {
        next();
        BoolPtr b = bool_expr();
        expect(Tok::RParen, "')'");
        return b;
      } catch (const ParseError&) {
        pos_ = save;
      }
    }
    ExprPtr lhs = expr();
    CompKind op;
    switch (peek().kind) {
      case Tok::Eq: op = CompKind::Eq; break;
      case Tok::Ne: op = CompKind::Ne; break;
      case Tok::Gt: op = CompKind::Gt; break;
      case Tok::Lt: op = CompKind::Lt; break;
      case Tok::Ge: op = CompKind::Ge; break;
      case Tok::Le: op = CompKind::Le; break;
      default: fail("a comparison operator");
    }
    next();
    return make_comp(op, std::move(lhs), expr());
  }

  // Expression grammar, loosest first: bitor < bitxor < bitand < +- < */.
  ExprPtr expr() { return bit_or(); }

  ExprPtr bit_or() {
    ExprPtr e = bit_xor();
    while (at_keyword("bitor")) {
      next();
      e = make_bitop(BitopKind::Or, std::move(e), bit_xor());
    }
    return e;
  }

  ExprPtr bit_xor() {
    ExprPtr e = bit_and();
    while (at_keyword("bitxor")) {
      next();
      e = make_bitop(BitopKind::Xor, std::move(e), bit_and());
    }
    return e;
  }

  ExprPtr bit_and() {
    ExprPtr e = additive();
    while (at_keyword("bitand")) {
      next();
      e = make_bitop(BitopKind::And, std::move(e), additive());
    }
    return e;
  }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        next();
        e = make_aop(AopKind::Add, std::move(e), multiplicative());
      } else if (peek().kind == Tok::Minus) {
        next();
        e = make_aop(AopKind::Sub, std::move(e), multiplicative());
      } else {
        return e;
      }
    }
  }

  ExprPtr multiplicative() {
    ExprPtr e = unary();
    for (;;) {
      if (peek().kind == Tok::Star) {
        next();
        e = make_aop(AopKind::Mul, std::move(e), unary());
      } else if (peek().kind == Tok::Slash) {
        next();
        e = make_aop(AopKind::Div, std::move(e), unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (eat_keyword("bitnot")) return make_bitnot(unary());
    return primary();
  }

  ExprPtr primary() {
    Nesting guard(*this);
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        next();
        NumLit n;
        n.kind = NumKind::Int;
        n.text = t.text;
        n.value = t.value;
        return make_num(n);
      }
      case Tok::Float: {
        next();
        NumLit n;
        n.kind = NumKind::Float;
        n.text = t.text;
        n.value = t.value;
        return make_num(n);
      }
      case Tok::CharLit: {
        next();
        NumLit n;
        n.kind = NumKind::Char;
        n.text = t.text;
        n.value = t.value;
        return make_num(n);
      }
      case Tok::Minus: {
        // Negative literal; the grammar has no unary minus on variables.
        next();
        const Token& num = peek();
        if (num.kind != Tok::Int && num.kind != Tok::Float)
          fail("a numeric literal after '-'");
        next();
        NumLit n;
        n.kind = num.kind == Tok::Int ? NumKind::Int : NumKind::Float;
        n.text = "-" + num.text;
        n.value = -num.value;
        return make_num(n);
      }
      case Tok::Ident: {
        next();
        if (peek().kind == Tok::LBracket) {
          next();
          ExprPtr index = expr();
          expect(Tok::RBracket, "']'");
          return make_array_read(VarName(t.text), std::move(index));
        }
        check_declared(t);
        return make_var(VarName(t.text));
      }
      case Tok::LParen: {
        next();
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("an expression");
    }
  }
};

} // namespace

Program parse_program(const std::string& src) {
  Parser parser(lex(src));
  Program p = parser.program();
  auto problems = validate(p);
  if (!problems.empty()) throw ParseError(1, 1, problems.front(), "");
  return p;
}

// --- pretty printer -----------------------------------------------------

namespace {

int expr_prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Aop:
      return (e.aop == AopKind::Mul || e.aop == AopKind::Div) ? 5 : 4;
    case ExprKind::Bitop:
      switch (e.bitop) {
        case BitopKind::And: return 3;
        case BitopKind::Xor: return 2;
        case BitopKind::Or: return 1;
      }
      return 1;
    default:
      return 6; // var, num, bitnot, array read
  }
}

void print_expr(const Expr& e, std::ostream& os);

void print_child(const Expr& child, int parent_prec, bool right,
                 std::ostream& os) {
  const int prec = expr_prec(child);
  const bool parens = right ? prec <= parent_prec : prec < parent_prec;
  if (parens) os << '(';
  print_expr(child, os);
  if (parens) os << ')';
}

const char* aop_token(AopKind op) {
  switch (op) {
    case AopKind::Add: return "+";
    case AopKind::Sub: return "-";
    case AopKind::Mul: return "*";
    case AopKind::Div: return "/";
  }
  return "?";
}

const char* bitop_token(BitopKind op) {
  switch (op) {
    case BitopKind::Or: return "bitor";
    case BitopKind::And: return "bitand";
    case BitopKind::Xor: return "bitxor";
  }
  return "?";
}

const char* comp_token(CompKind op) {
  switch (op) {
    case CompKind::Eq: return "=";
    case CompKind::Ne: return "!=";
    case CompKind::Gt: return ">";
    case CompKind::Lt: return "<";
    case CompKind::Ge: return ">=";
    case CompKind::Le: return "<=";
  }
  return "?";
}

void print_expr(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case ExprKind::Var:
      os << e.var.name;
      return;
    case ExprKind::Num:
      os << e.num.text;
      return;
    case ExprKind::Aop: {
      const int prec = expr_prec(e);
      print_child(*e.lhs, prec, false, os);
      os << ' ' << aop_token(e.aop) << ' ';
      print_child(*e.rhs, prec, true, os);
      return;
    }
    case ExprKind::Bitop: {
      const int prec = expr_prec(e);
      print_child(*e.lhs, prec, false, os);
      os << ' ' << bitop_token(e.bitop) << ' ';
      print_child(*e.rhs, prec, true, os);
      return;
    }
    case ExprKind::Bitnot:
      os << "bitnot ";
      print_child(*e.lhs, 5, true, os); // parenthesize binary operands
      return;
    case ExprKind::ArrayRead:
      os << e.var.name << '[';
      print_expr(*e.lhs, os);
      os << ']';
      return;
  }
}

int bool_prec(const BoolExpr& b) {
  switch (b.kind) {
    case BoolKind::Logop: return b.logop == LogopKind::Or ? 1 : 2;
    case BoolKind::Not: return 3;
    case BoolKind::Comp: return 4;
  }
  return 4;
}

void print_bool(const BoolExpr& b, std::ostream& os) {
  switch (b.kind) {
    case BoolKind::Comp:
      print_expr(*b.lhs, os);
      os << ' ' << comp_token(b.comp) << ' ';
      print_expr(*b.rhs, os);
      return;
    case BoolKind::Not:
      if (b.b1->kind == BoolKind::Not) {
        os << "not ";
        print_bool(*b.b1, os);
      } else {
        os << "not (";
        print_bool(*b.b1, os);
        os << ')';
      }
      return;
    case BoolKind::Logop: {
      const int prec = bool_prec(b);
      auto child = [&](const BoolExpr& c, bool right) {
        const int cp = bool_prec(c);
        const bool parens = right ? cp <= prec : cp < prec;
        if (parens) os << '(';
        print_bool(c, os);
        if (parens) os << ')';
      };
      child(*b.b1, false);
      os << (b.logop == LogopKind::And ? " and " : " or ");
      child(*b.b2, true);
      return;
    }
  }
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void print_stmt_lines(const Stmt& s, std::ostream& os, int depth);

// One statement as a line (or a brace-delimited group when the statement
// is itself a sequence, which keeps nesting shape through a re-parse).
void print_unit(const Stmt& s, std::ostream& os, int depth) {
  switch (s.kind) {
    case StmtKind::Assign:
      indent(os, depth);
      os << s.target.name << " := ";
      print_expr(*s.value, os);
      os << ";\n";
      return;
    case StmtKind::ArrayAssign:
      indent(os, depth);
      os << s.target.name << '[';
      print_expr(*s.index, os);
      os << "] := ";
      print_expr(*s.value, os);
      os << ";\n";
      return;
    case StmtKind::Skip:
      indent(os, depth);
      os << "skip;\n";
      return;
    case StmtKind::Call: {
      indent(os, depth);
      os << "call " << s.proc << '(';
      bool first = true;
      for (const Arg& a : s.args) {
        if (!first) os << ", ";
        first = false;
        if (a.mode == ArgMode::Ref) os << "ref ";
        print_expr(*a.expr, os);
      }
      os << ");\n";
      return;
    }
    case StmtKind::If: {
      indent(os, depth);
      os << "if (";
      print_bool(*s.cond, os);
      os << ") {\n";
      print_stmt_lines(*s.s1, os, depth + 1);
      indent(os, depth);
      if (s.s2->kind == StmtKind::Skip) {
        os << "}\n";
      } else {
        os << "} else {\n";
        print_stmt_lines(*s.s2, os, depth + 1);
        indent(os, depth);
        os << "}\n";
      }
      return;
    }
    case StmtKind::While:
      indent(os, depth);
      os << "while (";
      print_bool(*s.cond, os);
      os << ") {\n";
      print_stmt_lines(*s.s1, os, depth + 1);
      indent(os, depth);
      os << "}\n";
      return;
    case StmtKind::Seq:
      indent(os, depth);
      os << "{\n";
      print_stmt_lines(s, os, depth + 1);
      indent(os, depth);
      os << "}\n";
      return;
  }
}

void print_stmt_lines(const Stmt& s, std::ostream& os, int depth) {
  const Stmt* cur = &s;
  while (cur->kind == StmtKind::Seq) {
    print_unit(*cur->s1, os, depth);
    cur = cur->s2.get();
  }
  print_unit(*cur, os, depth);
}

} // namespace

std::string pretty_print(const Stmt& s) {
  std::ostringstream os;
  print_stmt_lines(s, os, 0);
  return os.str();
}

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print_expr(e, os);
  return os.str();
}

std::string pretty_print(const BoolExpr& b) {
  std::ostringstream os;
  print_bool(b, os);
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "begin\n";
  for (const Function& f : p.functions) {
    os << "  proc " << f.name << '(';
    bool first = true;
    for (const VarName& v : f.params) {
      if (!first) os << ", ";
      first = false;
      os << v.name;
    }
    os << ") begin\n";
    for (const VarName& v : f.locals) {
      indent(os, 2);
      os << "var " << v.name << ";\n";
    }
    print_stmt_lines(*f.body, os, 2);
    os << "  end\n";
  }
  os << "end\n";
  return os.str();
}

} // namespace rolescope
