#include "rolescope/c_frontend.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <set>

namespace rolescope {

namespace {

// --- C lexer -------------------------------------------------------------

enum class CTok { Ident, Int, Float, CharLit, StrLit, Punct, End };

struct CToken {
  CTok kind = CTok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int col = 1;
};

struct CLexOutput {
  std::vector<CToken> tokens;
  std::vector<std::pair<int, std::string>> pp_lines; // '#' lines, ignored
};

const std::set<std::string> kPuncts = {
    "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->",  "=",
    "<",   ">",   "!",  "&",  "|",  "^",  "~",  "+",  "-",  "*",   "/",
    "%",   ";",   ",",  "(",  ")",  "{",  "}",  "[",  "]",  "?",   ":",
    "."};

CLexOutput lex_c(const std::string& src) {
  CLexOutput out;
  int line = 1, col = 1;
  size_t i = 0;
  const size_t n = src.size();

  auto advance = [&](size_t count) {
    for (size_t k = 0; k < count && i < n; ++k, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };

  while (i < n) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) { advance(1); continue; }
    if (ch == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < n && src[i + 1] == '*') {
      const int l = line, c = col;
      advance(2);
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= n) throw ParseError(l, c, "closing */", "end of input");
      advance(2);
      continue;
    }
    if (ch == '#') {
      size_t start = i;
      while (i < n && src[i] != '\n') ++i;
      std::string text = src.substr(start, i - start);
      out.pp_lines.emplace_back(line, text.substr(0, 40));
      ++line;
      col = 1;
      if (i < n) ++i;
      continue;
    }
    const int l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      CToken t;
      t.kind = CTok::Ident;
      t.text = src.substr(i, j - i);
      t.line = l;
      t.col = c;
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      bool is_float = false;
      if (ch == '0' && j + 1 < n && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
        j += 2;
        while (j < n && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
      } else {
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        if (j < n && src[j] == '.') {
          is_float = true;
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      std::string text = src.substr(i, j - i);
      while (j < n && src[j] != '\0' && std::strchr("uUlLfF", src[j]))
        ++j; // suffixes dropped
      CToken t;
      t.kind = is_float ? CTok::Float : CTok::Int;
      t.text = text;
      t.value = std::stod(text, nullptr);
      if (text.size() > 1 && (text[1] == 'x' || text[1] == 'X'))
        t.value = static_cast<double>(std::stoll(text, nullptr, 16));
      t.line = l;
      t.col = c;
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (ch == '\'') {
      size_t j = i + 1;
      char value = 0;
      if (j < n && src[j] == '\\') {
        if (j + 1 >= n) throw ParseError(l, c, "character escape", "EOF");
        switch (src[j + 1]) {
          case 'n': value = '\n'; break;
          case 't': value = '\t'; break;
          case 'r': value = '\r'; break;
          case '0': value = '\0'; break;
          case '\\': value = '\\'; break;
          case '\'': value = '\''; break;
          case '"': value = '"'; break;
          default:
            throw ParseError(l, c, "character escape",
                             std::string("\\") + src[j + 1]);
        }
        j += 2;
      } else if (j < n && src[j] != '\'') {
        value = src[j];
        ++j;
      }
      if (j >= n || src[j] != '\'')
        throw ParseError(l, c, "closing ' of character literal",
                         j < n ? std::string(1, src[j]) : "end of input");
      ++j;
      CToken t;
      t.kind = CTok::CharLit;
      t.text = src.substr(i, j - i);
      t.value = static_cast<double>(static_cast<unsigned char>(value));
      t.line = l;
      t.col = c;
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (ch == '"') {
      size_t j = i + 1;
      while (j < n && src[j] != '"') {
        if (src[j] == '\\' && j + 1 < n) ++j;
        ++j;
      }
      if (j >= n) throw ParseError(l, c, "closing \"", "end of input");
      ++j;
      CToken t;
      t.kind = CTok::StrLit;
      t.text = src.substr(i, j - i);
      t.line = l;
      t.col = c;
      advance(j - i);
      out.tokens.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (size_t len = 3; len >= 1 && !matched; --len) {
      if (i + len > n) continue;
      std::string cand = src.substr(i, len);
      if (kPuncts.contains(cand)) {
        CToken t;
        t.kind = CTok::Punct;
        t.text = cand;
        t.line = l;
        t.col = c;
        advance(len);
        out.tokens.push_back(std::move(t));
        matched = true;
      }
    }
    if (!matched) throw ParseError(l, c, "a token", std::string(1, ch));
  }
  CToken end;
  end.kind = CTok::End;
  end.text = "end of input";
  end.line = line;
  end.col = col;
  out.tokens.push_back(std::move(end));
  return out;
}

// --- C expression/statement trees -----------------------------------------

struct CExpr;
using CExprPtr = std::unique_ptr<CExpr>;

struct CExpr {
  enum Kind { Ident, Num, Str, Unary, Binary, Call, Index, Deref } kind = Num;
  std::string text; // Ident name, operator spelling, or callee name
  NumLit num;
  std::vector<CExprPtr> kids;
  int line = 0;
};

struct CStmt;
using CStmtPtr = std::unique_ptr<CStmt>;

struct CDeclEntry {
  std::string name;
  int pointers = 0;
  CExprPtr init; // may be null
};

struct CStmt {
  enum Kind {
    Block, Decl, Assign, CompoundAssign, IncDec, CallStmt, If, While,
    DoWhile, For, Empty, Unsupported
  } kind = Empty;
  int line = 0;
  std::vector<CStmtPtr> block;
  std::vector<CDeclEntry> decls;
  CExprPtr lhs, rhs, cond;     // Assign/CompoundAssign/IncDec/If/While/loops
  std::string op;              // "+=" etc, or "++"/"--"
  CStmtPtr body, else_body;    // If/While/DoWhile/For
  CStmtPtr init, step;         // For
  std::string what;            // Unsupported description
};

const std::set<std::string> kTypeWords = {"void",   "int",   "float","char",
                                          "double", "short", "long", "signed",
                                          "unsigned", "const", "static",
                                          "extern"};

struct CParam {
  std::string name;
  int line = 0;
};

struct CFunctionDef {
  std::string name;
  std::vector<CParam> params;
  CStmtPtr body;
  int line = 0;
};

struct CFile {
  std::vector<CFunctionDef> functions;
  std::vector<std::pair<int, std::string>> file_scope_skips;
};

class CParser {
 public:
  explicit CParser(std::vector<CToken> toks) : toks_(std::move(toks)) {}

  CFile parse_file(std::vector<std::pair<int, std::string>> pp_lines) {
    CFile file;
    file.file_scope_skips = std::move(pp_lines);
    while (peek().kind != CTok::End) top_level(file);
    return file;
  }

 private:
  static constexpr int kMaxNesting = 256;

  std::vector<CToken> toks_;
  size_t pos_ = 0;
  int depth_ = 0;

  // Recursion guard, same idea as the other parser: reject pathological
  // nesting before the call stack runs out.
  struct Nesting {
    CParser& parser;
    explicit Nesting(CParser& p) : parser(p) {
      if (parser.depth_ >= kMaxNesting) parser.fail("shallower nesting");
      ++parser.depth_;
    }
    ~Nesting() { --parser.depth_; }
  };

  const CToken& peek(size_t ahead = 0) const {
    const size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const CToken& next() {
    const CToken& t = peek();
    if (t.kind != CTok::End) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const CToken& t = peek();
    throw ParseError(t.line, t.col, expected, t.text);
  }
  bool at_punct(std::string_view p) const {
    return peek().kind == CTok::Punct && peek().text == p;
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail("'" + std::string(p) + "'");
    next();
  }
  bool eat_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }
  bool at_word(std::string_view w) const {
    return peek().kind == CTok::Ident && peek().text == w;
  }
  bool at_type_word() const {
    return peek().kind == CTok::Ident && kTypeWords.contains(peek().text);
  }

  // Consumes tokens through the statement-ish construct at hand: balanced
  // parens/braces, up to a ';' at depth zero or a closing '}' of its own.
  void skip_construct() {
    int paren = 0, brace = 0;
    for (;;) {
      const CToken& t = peek();
      if (t.kind == CTok::End) return;
      if (t.kind == CTok::Punct) {
        if (t.text == "(") ++paren;
        if (t.text == ")") {
          if (paren == 0 && brace == 0) return; // caller's closing paren
          --paren;
        }
        if (t.text == "{") ++brace;
        if (t.text == "}") {
          if (brace == 0) return; // caller's closing brace
          --brace;
          next();
          if (brace == 0 && paren == 0) return;
          continue;
        }
        if (t.text == ";" && paren == 0 && brace == 0) {
          next();
          return;
        }
      }
      next();
    }
  }

  void top_level(CFile& file) {
    const CToken& t = peek();
    if (t.kind == CTok::Ident &&
        (t.text == "struct" || t.text == "union" || t.text == "typedef" ||
         t.text == "enum")) {
      file.file_scope_skips.emplace_back(t.line, t.text + " declaration");
      skip_construct();
      eat_punct(";");
      return;
    }
    if (!at_type_word()) {
      file.file_scope_skips.emplace_back(t.line,
                                         "unrecognized file-scope item");
      skip_construct();
      return;
    }
    while (at_type_word()) next();
    while (eat_punct("*")) {}
    if (peek().kind != CTok::Ident) fail("a declarator name");
    std::string name = next().text;
    if (at_punct("(")) {
      int def_line = peek().line;
      auto params = param_list();
      if (eat_punct(";")) {
        file.file_scope_skips.emplace_back(def_line,
                                           "function declaration " + name);
        return;
      }
      if (!at_punct("{")) fail("'{' or ';'");
      CFunctionDef def;
      def.name = std::move(name);
      def.params = std::move(params);
      def.line = def_line;
      def.body = block();
      file.functions.push_back(std::move(def));
      return;
    }
    // File-scope variable; analysis is per function, so skip it.
    file.file_scope_skips.emplace_back(t.line, "file-scope variable " + name);
    skip_construct();
  }

  std::vector<CParam> param_list() {
    expect_punct("(");
    std::vector<CParam> params;
    if (at_punct(")")) {
      next();
      return params;
    }
    if (at_word("void") && peek(1).kind == CTok::Punct &&
        peek(1).text == ")") {
      next();
      next();
      return params;
    }
    int unnamed = 0;
    for (;;) {
      if (!at_type_word()) fail("a parameter type");
      while (at_type_word()) next();
      while (eat_punct("*")) {}
      CParam p;
      p.line = peek().line;
      if (peek().kind == CTok::Ident) {
        p.name = next().text;
      } else {
        p.name = "arg" + std::to_string(unnamed++);
      }
      while (eat_punct("[")) { // array parameter; extent ignored
        while (!at_punct("]") && peek().kind != CTok::End) next();
        expect_punct("]");
      }
      params.push_back(std::move(p));
      if (!eat_punct(",")) break;
    }
    expect_punct(")");
    return params;
  }

  CStmtPtr block() {
    expect_punct("{");
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::Block;
    s->line = peek().line;
    while (!at_punct("}") && peek().kind != CTok::End)
      s->block.push_back(statement());
    expect_punct("}");
    return s;
  }

  CStmtPtr unsupported(int line, std::string what) {
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::Unsupported;
    s->line = line;
    s->what = std::move(what);
    return s;
  }

  CStmtPtr statement() {
    Nesting guard(*this);
    const CToken& t = peek();
    if (at_punct("{")) return block();
    if (eat_punct(";")) {
      auto s = std::make_unique<CStmt>();
      s->kind = CStmt::Empty;
      s->line = t.line;
      return s;
    }
    if (t.kind == CTok::Ident) {
      if (t.text == "struct" || t.text == "union" || t.text == "enum") {
        skip_construct();
        return unsupported(t.line, t.text + " declaration");
      }
      if (at_type_word()) return declaration();
      if (t.text == "if") return if_stmt();
      if (t.text == "while") return while_stmt();
      if (t.text == "do") return do_while_stmt();
      if (t.text == "for") return for_stmt();
      if (t.text == "return" || t.text == "goto" || t.text == "break" ||
          t.text == "continue") {
        skip_construct();
        return unsupported(t.line, t.text + " statement");
      }
      if (t.text == "switch") {
        skip_construct();
        return unsupported(t.line, "switch statement");
      }
      if (t.text == "case" || t.text == "default") {
        skip_construct();
        return unsupported(t.line, "case label");
      }
      // Plain label: consume "name:" and carry on with the statement.
      if (peek(1).kind == CTok::Punct && peek(1).text == ":") {
        next();
        next();
        return statement();
      }
    }
    return simple_statement();
  }

  CStmtPtr declaration() {
    const int line = peek().line;
    bool saw_struct = false;
    while (at_type_word()) {
      if (at_word("struct") || at_word("union")) saw_struct = true;
      next();
    }
    if (saw_struct) {
      skip_construct();
      return unsupported(line, "aggregate declaration");
    }
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::Decl;
    s->line = line;
    for (;;) {
      CDeclEntry entry;
      while (eat_punct("*")) ++entry.pointers;
      if (peek().kind != CTok::Ident) fail("a variable name");
      entry.name = next().text;
      if (at_punct("[")) { // local array; extent skipped, no scalar var
        while (eat_punct("[")) {
          while (!at_punct("]") && peek().kind != CTok::End) next();
          expect_punct("]");
        }
        entry.pointers = -1; // marks an array declarator
      }
      if (eat_punct("=")) entry.init = expression();
      s->decls.push_back(std::move(entry));
      if (!eat_punct(",")) break;
    }
    expect_punct(";");
    return s;
  }

  CStmtPtr if_stmt() {
    const int line = next().line; // 'if'
    expect_punct("(");
    CExprPtr cond = expression();
    expect_punct(")");
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::If;
    s->line = line;
    s->cond = std::move(cond);
    s->body = statement();
    if (at_word("else")) {
      next();
      s->else_body = statement();
    }
    return s;
  }

  CStmtPtr while_stmt() {
    const int line = next().line; // 'while'
    expect_punct("(");
    CExprPtr cond = expression();
    expect_punct(")");
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::While;
    s->line = line;
    s->cond = std::move(cond);
    s->body = statement();
    return s;
  }

  CStmtPtr do_while_stmt() {
    const int line = next().line; // 'do'
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::DoWhile;
    s->line = line;
    s->body = statement();
    if (!at_word("while")) fail("'while'");
    next();
    expect_punct("(");
    s->cond = expression();
    expect_punct(")");
    expect_punct(";");
    return s;
  }

  CStmtPtr for_stmt() {
    const int line = next().line; // 'for'
    expect_punct("(");
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::For;
    s->line = line;
    if (!at_punct(";")) {
      s->init = at_type_word() ? declaration() : simple_statement();
    } else {
      next();
    }
    if (!at_punct(";")) s->cond = expression();
    expect_punct(";");
    if (!at_punct(")")) s->step = simple_no_semi();
    expect_punct(")");
    s->body = statement();
    return s;
  }

  CStmtPtr simple_statement() {
    CStmtPtr s = simple_no_semi();
    if (s->kind == CStmt::Unsupported) return s;
    if (!eat_punct(";")) {
      const int line = peek().line;
      std::string offender = peek().text;
      skip_construct();
      return unsupported(line, "statement continuing with '" + offender + "'");
    }
    return s;
  }

  // Assignment, compound assignment, ++/--, or a call, without the ';'.
  CStmtPtr simple_no_semi() {
    const int line = peek().line;
    CExprPtr e = expression();
    static const std::set<std::string> kCompound = {
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
    if (at_punct("=")) {
      next();
      auto s = std::make_unique<CStmt>();
      s->kind = CStmt::Assign;
      s->line = line;
      s->lhs = std::move(e);
      s->rhs = expression();
      return s;
    }
    if (peek().kind == CTok::Punct && kCompound.contains(peek().text)) {
      std::string op = next().text;
      auto s = std::make_unique<CStmt>();
      s->kind = CStmt::CompoundAssign;
      s->line = line;
      s->op = op.substr(0, op.size() - 1);
      s->lhs = std::move(e);
      s->rhs = expression();
      return s;
    }
    if (e->kind == CExpr::Unary && (e->text == "++" || e->text == "--")) {
      auto s = std::make_unique<CStmt>();
      s->kind = CStmt::IncDec;
      s->line = line;
      s->op = e->text;
      s->lhs = std::move(e->kids[0]);
      return s;
    }
    if (e->kind == CExpr::Call) {
      auto s = std::make_unique<CStmt>();
      s->kind = CStmt::CallStmt;
      s->line = line;
      s->lhs = std::move(e);
      return s;
    }
    auto s = std::make_unique<CStmt>();
    s->kind = CStmt::Unsupported;
    s->line = line;
    s->what = "expression statement with no effect";
    return s;
  }

  // --- C expressions (no assignment, ternary, or comma) ---

  int binary_prec(const std::string& op) const {
    if (op == "*" || op == "/" || op == "%") return 10;
    if (op == "+" || op == "-") return 9;
    if (op == "<<" || op == ">>") return 8;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
    if (op == "==" || op == "!=") return 6;
    if (op == "&") return 5;
    if (op == "^") return 4;
    if (op == "|") return 3;
    if (op == "&&") return 2;
    if (op == "||") return 1;
    return 0;
  }

  CExprPtr expression() { return binary_expr(1); }

  CExprPtr binary_expr(int min_prec) {
    CExprPtr lhs = unary_expr();
    for (;;) {
      if (peek().kind != CTok::Punct) return lhs;
      const int prec = binary_prec(peek().text);
      if (prec < min_prec || prec == 0) return lhs;
      std::string op = next().text;
      CExprPtr rhs = binary_expr(prec + 1);
      auto e = std::make_unique<CExpr>();
      e->kind = CExpr::Binary;
      e->text = std::move(op);
      e->line = lhs->line;
      e->kids.push_back(std::move(lhs));
      e->kids.push_back(std::move(rhs));
      lhs = std::move(e);
    }
  }

  CExprPtr make_unary(const std::string& op, CExprPtr inner, int line) {
    auto e = std::make_unique<CExpr>();
    e->kind = op == "*" ? CExpr::Deref : CExpr::Unary;
    e->text = op;
    e->line = line;
    e->kids.push_back(std::move(inner));
    return e;
  }

  CExprPtr unary_expr() {
    Nesting guard(*this);
    const CToken& t = peek();
    if (t.kind == CTok::Punct &&
        (t.text == "-" || t.text == "+" || t.text == "!" || t.text == "~" ||
         t.text == "*" || t.text == "&" || t.text == "++" || t.text == "--")) {
      std::string op = next().text;
      return make_unary(op, unary_expr(), t.line);
    }
    return postfix_expr();
  }

  CExprPtr postfix_expr() {
    CExprPtr e = primary_expr();
    for (;;) {
      if (at_punct("[")) {
        next();
        CExprPtr index = expression();
        expect_punct("]");
        auto idx = std::make_unique<CExpr>();
        idx->kind = CExpr::Index;
        idx->line = e->line;
        idx->kids.push_back(std::move(e));
        idx->kids.push_back(std::move(index));
        e = std::move(idx);
        continue;
      }
      if (at_punct("(")) {
        if (e->kind != CExpr::Ident) fail("a function name before '('");
        next();
        auto call = std::make_unique<CExpr>();
        call->kind = CExpr::Call;
        call->text = e->text;
        call->line = e->line;
        if (!at_punct(")")) {
          for (;;) {
            call->kids.push_back(expression());
            if (!eat_punct(",")) break;
          }
        }
        expect_punct(")");
        e = std::move(call);
        continue;
      }
      if (at_punct("++") || at_punct("--")) {
        std::string op = next().text;
        const int line = e->line;
        e = make_unary(op, std::move(e), line);
        continue;
      }
      return e;
    }
  }

  CExprPtr primary_expr() {
    const CToken& t = peek();
    switch (t.kind) {
      case CTok::Ident: {
        next();
        auto e = std::make_unique<CExpr>();
        e->kind = CExpr::Ident;
        e->text = t.text;
        e->line = t.line;
        return e;
      }
      case CTok::Int:
      case CTok::Float: {
        next();
        auto e = std::make_unique<CExpr>();
        e->kind = CExpr::Num;
        e->num.kind = t.kind == CTok::Int ? NumKind::Int : NumKind::Float;
        e->num.text = t.text;
        e->num.value = t.value;
        if (e->num.kind == NumKind::Int)
          e->num.text = std::to_string(static_cast<long long>(t.value));
        e->line = t.line;
        return e;
      }
      case CTok::CharLit: {
        next();
        auto e = std::make_unique<CExpr>();
        e->kind = CExpr::Num;
        e->num.kind = NumKind::Char;
        e->num.text = t.text;
        e->num.value = t.value;
        e->line = t.line;
        return e;
      }
      case CTok::StrLit: {
        next();
        auto e = std::make_unique<CExpr>();
        e->kind = CExpr::Str;
        e->text = t.text;
        e->line = t.line;
        return e;
      }
      case CTok::Punct:
        if (t.text == "(") {
          next();
          CExprPtr e = expression();
          expect_punct(")");
          return e;
        }
        fail("an expression");
      default:
        fail("an expression");
    }
  }
};

// --- lowering --------------------------------------------------------------

// Thrown for recognized-but-unsupported expressions; the enclosing
// statement degrades to skip with a report entry.
struct Unsupported {
  int line;
  std::string what;
};

class FunctionLowerer {
 public:
  FunctionLowerer(const CFunctionDef& def, LoweringReport& report)
      : def_(def), report_(report) {}

  Function run() {
    Function f;
    f.name = def_.name;
    for (const CParam& p : def_.params) {
      if (declared_.insert(VarName(p.name)).second) {
        f.params.push_back(VarName(p.name));
      } else {
        report_.skipped_constructs.emplace_back(
            p.line, "duplicate parameter " + p.name);
      }
    }
    std::vector<StmtPtr> stmts = lower_block(*def_.body);
    f.locals = locals_;
    f.body = seq_of(std::move(stmts));
    assign_labels(f);
    return f;
  }

 private:
  const CFunctionDef& def_;
  LoweringReport& report_;
  VarSet declared_;
  std::vector<VarName> locals_;
  int next_temp_ = 0;

  void declare(const std::string& name) {
    if (declared_.insert(VarName(name)).second)
      locals_.push_back(VarName(name));
  }

  VarName fresh_slot() {
    std::string name;
    do {
      name = "ret" + std::to_string(next_temp_++);
    } while (declared_.contains(VarName(name)));
    declare(name);
    report_.synthetic_vars.push_back(VarName(name));
    return VarName(name);
  }

  void skip(int line, std::string what) {
    report_.skipped_constructs.emplace_back(line, std::move(what));
  }

  ExprPtr zero() { return make_num(int_lit(0)); }
  ExprPtr one() { return make_num(int_lit(1)); }

  static bool is_bool_shaped(const CExpr& e) {
    if (e.kind == CExpr::Unary && e.text == "!") return true;
    if (e.kind != CExpr::Binary) return false;
    static const std::set<std::string> kBoolOps = {"==", "!=", "<",  ">",
                                                   "<=", ">=", "&&", "||"};
    return kBoolOps.contains(e.text);
  }

  // --- value context ---

  ExprPtr lower_value(const CExpr& e, std::vector<StmtPtr>& hoisted) {
    switch (e.kind) {
      case CExpr::Ident: {
        if (!declared_.contains(VarName(e.text))) {
          declare(e.text);
          skip(e.line, "implicit variable " + e.text);
        }
        return make_var(VarName(e.text));
      }
      case CExpr::Num:
        return make_num(e.num);
      case CExpr::Str:
        return zero(); // inert placeholder; string values carry no roles
      case CExpr::Deref: {
        const CExpr& inner = *e.kids[0];
        if (inner.kind == CExpr::Ident)
          return make_array_read(VarName("__deref_" + inner.text), zero());
        throw Unsupported{e.line, "pointer dereference of an expression"};
      }
      case CExpr::Index: {
        if (e.kids[0]->kind != CExpr::Ident)
          throw Unsupported{e.line, "subscript of a non-identifier"};
        return make_array_read(VarName(e.kids[0]->text),
                               lower_value(*e.kids[1], hoisted));
      }
      case CExpr::Call: {
        VarName slot = fresh_slot();
        hoisted.push_back(lower_call(e, slot, hoisted));
        return make_var(slot);
      }
      case CExpr::Unary: {
        if (e.text == "+") return lower_value(*e.kids[0], hoisted);
        if (e.text == "-") {
          if (e.kids[0]->kind == CExpr::Num) {
            NumLit n = e.kids[0]->num;
            n.value = -n.value;
            n.text = "-" + n.text;
            return make_num(n);
          }
          return make_aop(AopKind::Sub, zero(), lower_value(*e.kids[0], hoisted));
        }
        if (e.text == "~") return make_bitnot(lower_value(*e.kids[0], hoisted));
        if (e.text == "&") throw Unsupported{e.line, "address-of in expression"};
        if (e.text == "!" )
          throw Unsupported{e.line, "logical value used arithmetically"};
        throw Unsupported{e.line, "operator " + e.text + " in expression"};
      }
      case CExpr::Binary: {
        const std::string& op = e.text;
        if (op == "+" || op == "-" || op == "*" || op == "/") {
          AopKind k = op == "+"   ? AopKind::Add
                      : op == "-" ? AopKind::Sub
                      : op == "*" ? AopKind::Mul
                                  : AopKind::Div;
          ExprPtr l = lower_value(*e.kids[0], hoisted);
          ExprPtr r = lower_value(*e.kids[1], hoisted);
          return make_aop(k, std::move(l), std::move(r));
        }
        if (op == "&" || op == "|" || op == "^") {
          BitopKind k = op == "&"   ? BitopKind::And
                        : op == "|" ? BitopKind::Or
                                    : BitopKind::Xor;
          ExprPtr l = lower_value(*e.kids[0], hoisted);
          ExprPtr r = lower_value(*e.kids[1], hoisted);
          return make_bitop(k, std::move(l), std::move(r));
        }
        if (op == "<<" || op == ">>") return lower_shift(e, hoisted);
        if (op == "%") throw Unsupported{e.line, "modulo operator"};
        throw Unsupported{e.line, "logical value used arithmetically"};
      }
    }
    throw Unsupported{e.line, "expression"};
  }

  // Shift by a constant is multiplication/division by a power of two;
  // anything else goes through an opaque helper call so no bitwise
  // evidence is fabricated.
  ExprPtr lower_shift(const CExpr& e, std::vector<StmtPtr>& hoisted) {
    const bool left = e.text == "<<";
    const CExpr& amount = *e.kids[1];
    if (amount.kind == CExpr::Num && amount.num.kind == NumKind::Int &&
        amount.num.value >= 0 && amount.num.value <= 62) {
      const long long factor = 1LL << static_cast<long long>(amount.num.value);
      ExprPtr base = lower_value(*e.kids[0], hoisted);
      return make_aop(left ? AopKind::Mul : AopKind::Div, std::move(base),
                      make_num(int_lit(factor)));
    }
    VarName slot = fresh_slot();
    std::vector<Arg> args;
    args.push_back(value_arg(make_var(slot)));
    args.push_back(value_arg(lower_value(*e.kids[0], hoisted)));
    args.push_back(value_arg(lower_value(*e.kids[1], hoisted)));
    hoisted.push_back(
        make_call(left ? "__shift_left" : "__shift_right", std::move(args)));
    return make_var(slot);
  }

  StmtPtr lower_call(const CExpr& call, VarName slot,
                     std::vector<StmtPtr>& hoisted) {
    std::vector<Arg> args;
    args.push_back(value_arg(make_var(slot)));
    for (const CExprPtr& arg : call.kids) {
      if (arg->kind == CExpr::Unary && arg->text == "&" &&
          arg->kids[0]->kind == CExpr::Ident) {
        const std::string& name = arg->kids[0]->text;
        if (!declared_.contains(VarName(name))) {
          declare(name);
          skip(arg->line, "implicit variable " + name);
        }
        args.push_back(ref_arg(VarName(name)));
        continue;
      }
      if (arg->kind == CExpr::Unary && arg->text == "&") {
        skip(arg->line, "address-of non-variable argument");
        args.push_back(value_arg(lower_value(*arg->kids[0], hoisted)));
        continue;
      }
      args.push_back(value_arg(lower_value(*arg, hoisted)));
    }
    return make_call(call.text, std::move(args));
  }

  // --- condition context ---

  BoolPtr lower_cond(const CExpr& e, std::vector<StmtPtr>& hoisted) {
    if (e.kind == CExpr::Binary && (e.text == "&&" || e.text == "||")) {
      BoolPtr l = lower_cond(*e.kids[0], hoisted);
      BoolPtr r = lower_cond(*e.kids[1], hoisted);
      return make_logop(e.text == "&&" ? LogopKind::And : LogopKind::Or,
                        std::move(l), std::move(r));
    }
    if (e.kind == CExpr::Unary && e.text == "!")
      return make_not(lower_cond(*e.kids[0], hoisted));
    if (e.kind == CExpr::Binary) {
      CompKind op;
      bool is_comp = true;
      if (e.text == "==") op = CompKind::Eq;
      else if (e.text == "!=") op = CompKind::Ne;
      else if (e.text == "<") op = CompKind::Lt;
      else if (e.text == ">") op = CompKind::Gt;
      else if (e.text == "<=") op = CompKind::Le;
      else if (e.text == ">=") op = CompKind::Ge;
      else is_comp = false;
      if (is_comp) {
        ExprPtr l = lower_value(*e.kids[0], hoisted);
        ExprPtr r = lower_value(*e.kids[1], hoisted);
        return make_comp(op, std::move(l), std::move(r));
      }
    }
    // Scalar condition: compare against zero.
    return make_comp(CompKind::Ne, lower_value(e, hoisted), zero());
  }

  // --- statements ---

  std::vector<StmtPtr> lower_block(const CStmt& block) {
    std::vector<StmtPtr> out;
    for (const CStmtPtr& s : block.block) lower_stmt(*s, out);
    return out;
  }

  void lower_stmt(const CStmt& s, std::vector<StmtPtr>& out) {
    try {
      lower_stmt_inner(s, out);
    } catch (const Unsupported& u) {
      skip(u.line, u.what);
      out.push_back(make_skip());
    }
  }

  void lower_stmt_inner(const CStmt& s, std::vector<StmtPtr>& out) {
    switch (s.kind) {
      case CStmt::Block: {
        for (const CStmtPtr& inner : s.block) lower_stmt(*inner, out);
        return;
      }
      case CStmt::Empty:
        return;
      case CStmt::Unsupported:
        skip(s.line, s.what);
        out.push_back(make_skip());
        return;
      case CStmt::Decl: {
        for (const CDeclEntry& d : s.decls) {
          if (d.pointers < 0) continue; // local array, no scalar variable
          if (declared_.contains(VarName(d.name)))
            skip(s.line, "redeclaration of " + d.name);
          else
            declare(d.name);
          if (d.init) lower_assign_to(VarName(d.name), *d.init, s.line, out);
        }
        return;
      }
      case CStmt::Assign: {
        const CExpr& lhs = *s.lhs;
        if (lhs.kind == CExpr::Ident) {
          if (!declared_.contains(VarName(lhs.text))) {
            declare(lhs.text);
            skip(lhs.line, "implicit variable " + lhs.text);
          }
          lower_assign_to(VarName(lhs.text), *s.rhs, s.line, out);
          return;
        }
        if (lhs.kind == CExpr::Index && lhs.kids[0]->kind == CExpr::Ident) {
          std::vector<StmtPtr> hoisted;
          ExprPtr index = lower_value(*lhs.kids[1], hoisted);
          ExprPtr value = lower_value(*s.rhs, hoisted);
          for (auto& h : hoisted) out.push_back(std::move(h));
          out.push_back(make_array_assign(VarName(lhs.kids[0]->text),
                                          std::move(index), std::move(value)));
          return;
        }
        if (lhs.kind == CExpr::Deref && lhs.kids[0]->kind == CExpr::Ident) {
          std::vector<StmtPtr> hoisted;
          ExprPtr value = lower_value(*s.rhs, hoisted);
          for (auto& h : hoisted) out.push_back(std::move(h));
          out.push_back(
              make_array_assign(VarName("__deref_" + lhs.kids[0]->text),
                                zero(), std::move(value)));
          return;
        }
        throw Unsupported{s.line, "assignment to this lvalue form"};
      }
      case CStmt::CompoundAssign: {
        // x op= e  ->  x = x op e, for every lvalue form we accept.
        auto combined = std::make_unique<CExpr>();
        combined->kind = CExpr::Binary;
        combined->text = s.op;
        combined->line = s.line;
        combined->kids.push_back(clone_cexpr(*s.lhs));
        combined->kids.push_back(clone_cexpr(*s.rhs));
        CStmt desugared;
        desugared.kind = CStmt::Assign;
        desugared.line = s.line;
        desugared.lhs = clone_cexpr(*s.lhs);
        desugared.rhs = std::move(combined);
        lower_stmt_inner(desugared, out);
        return;
      }
      case CStmt::IncDec: {
        auto amount = std::make_unique<CExpr>();
        amount->kind = CExpr::Num;
        amount->num = int_lit(1);
        amount->line = s.line;
        auto combined = std::make_unique<CExpr>();
        combined->kind = CExpr::Binary;
        combined->text = s.op == "++" ? "+" : "-";
        combined->line = s.line;
        combined->kids.push_back(clone_cexpr(*s.lhs));
        combined->kids.push_back(std::move(amount));
        CStmt desugared;
        desugared.kind = CStmt::Assign;
        desugared.line = s.line;
        desugared.lhs = clone_cexpr(*s.lhs);
        desugared.rhs = std::move(combined);
        lower_stmt_inner(desugared, out);
        return;
      }
      case CStmt::CallStmt: {
        std::vector<StmtPtr> hoisted;
        VarName slot = fresh_slot();
        StmtPtr call = lower_call(*s.lhs, slot, hoisted);
        for (auto& h : hoisted) out.push_back(std::move(h));
        out.push_back(std::move(call));
        return;
      }
      case CStmt::If: {
        std::vector<StmtPtr> hoisted;
        BoolPtr cond = lower_cond(*s.cond, hoisted);
        std::vector<StmtPtr> then_stmts;
        lower_stmt(*s.body, then_stmts);
        std::vector<StmtPtr> else_stmts;
        if (s.else_body) lower_stmt(*s.else_body, else_stmts);
        for (auto& h : hoisted) out.push_back(std::move(h));
        out.push_back(make_if(std::move(cond), seq_of(std::move(then_stmts)),
                              seq_of(std::move(else_stmts))));
        return;
      }
      case CStmt::While: {
        std::vector<StmtPtr> hoisted;
        BoolPtr cond = lower_cond(*s.cond, hoisted);
        std::vector<StmtPtr> body;
        lower_stmt(*s.body, body);
        // The condition is re-evaluated each iteration: its hoisted calls
        // run before the loop and again at the end of the body.
        for (const StmtPtr& h : hoisted) body.push_back(clone(*h));
        for (auto& h : hoisted) out.push_back(std::move(h));
        out.push_back(make_while(std::move(cond), seq_of(std::move(body))));
        return;
      }
      case CStmt::DoWhile: {
        // do { s } while (b)  ->  s; while (b) { s }
        std::vector<StmtPtr> body;
        lower_stmt(*s.body, body);
        std::vector<StmtPtr> hoisted;
        BoolPtr cond = lower_cond(*s.cond, hoisted);
        std::vector<StmtPtr> loop_body;
        for (const StmtPtr& b : body) loop_body.push_back(clone(*b));
        for (const StmtPtr& h : hoisted) loop_body.push_back(clone(*h));
        for (auto& b : body) out.push_back(std::move(b));
        for (auto& h : hoisted) out.push_back(std::move(h));
        out.push_back(make_while(std::move(cond), seq_of(std::move(loop_body))));
        return;
      }
      case CStmt::For: {
        // for (init; cond; step) s  ->  init; while (cond) { s; step }
        if (s.init) lower_stmt(*s.init, out);
        std::vector<StmtPtr> hoisted;
        BoolPtr cond = s.cond ? lower_cond(*s.cond, hoisted)
                              : make_comp(CompKind::Eq, zero(), zero());
        std::vector<StmtPtr> body;
        lower_stmt(*s.body, body);
        if (s.step) lower_stmt(*s.step, body);
        for (const StmtPtr& h : hoisted) body.push_back(clone(*h));
        for (auto& h : hoisted) out.push_back(std::move(h));
        out.push_back(make_while(std::move(cond), seq_of(std::move(body))));
        return;
      }
    }
  }

  // Assignment to a scalar; calls and boolean-shaped right-hand sides get
  // their dedicated lowerings here.
  void lower_assign_to(VarName target, const CExpr& rhs, int line,
                       std::vector<StmtPtr>& out) {
    if (rhs.kind == CExpr::Call) {
      std::vector<StmtPtr> hoisted;
      StmtPtr call = lower_call(rhs, target, hoisted);
      for (auto& h : hoisted) out.push_back(std::move(h));
      out.push_back(std::move(call));
      return;
    }
    if (is_bool_shaped(rhs)) {
      // x = (b)  ->  if (b) x := 1 else x := 0
      std::vector<StmtPtr> hoisted;
      BoolPtr cond = lower_cond(rhs, hoisted);
      for (auto& h : hoisted) out.push_back(std::move(h));
      out.push_back(make_if(std::move(cond), make_assign(target, one()),
                            make_assign(target, zero())));
      return;
    }
    std::vector<StmtPtr> hoisted;
    ExprPtr value = lower_value(rhs, hoisted);
    for (auto& h : hoisted) out.push_back(std::move(h));
    out.push_back(make_assign(std::move(target), std::move(value)));
    (void)line;
  }

  static CExprPtr clone_cexpr(const CExpr& e) {
    auto out = std::make_unique<CExpr>();
    out->kind = e.kind;
    out->text = e.text;
    out->num = e.num;
    out->line = e.line;
    for (const CExprPtr& k : e.kids) out->kids.push_back(clone_cexpr(*k));
    return out;
  }
};

} // namespace

LoweredProgram lower_c(const std::string& src) {
  CLexOutput lexed = lex_c(src);
  CParser parser(std::move(lexed.tokens));
  CFile file = parser.parse_file(std::move(lexed.pp_lines));

  LoweredProgram out;
  if (!file.file_scope_skips.empty()) {
    LoweringReport file_report;
    file_report.function = "<file scope>";
    file_report.skipped_constructs = std::move(file.file_scope_skips);
    out.reports.push_back(std::move(file_report));
  }
  std::set<std::string> names;
  int rename = 0;
  for (CFunctionDef& def : file.functions) {
    LoweringReport report;
    if (!names.insert(def.name).second) {
      std::string renamed = def.name + "__dup" + std::to_string(rename++);
      report.skipped_constructs.emplace_back(
          def.line, "duplicate function " + def.name + " renamed " + renamed);
      def.name = renamed;
      names.insert(renamed);
    }
    report.function = def.name;
    FunctionLowerer lowerer(def, report);
    out.program.functions.push_back(lowerer.run());
    out.reports.push_back(std::move(report));
  }
  return out;
}

} // namespace rolescope
