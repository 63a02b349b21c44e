#include "doctest.h"

#include <fstream>
#include <sstream>

#include "rolescope/catalog.hpp"
#include "support/helpers.hpp"
#include "support/random_program.hpp"

using namespace rolescope;
using rolescope::testing::names;
using rolescope::testing::parse_wrapped;

namespace {

// gen applied to a one-statement (or short) body given as source text.
VarSet gen_on(VarSet (*gen)(const Stmt&, const VarSet&),
              const std::string& decls, const std::string& body,
              const VarSet& res = {}) {
  Program p = parse_wrapped(decls, body);
  return gen(*p.functions[0].body, res);
}

const std::string kAll = "var a; var b; var c; var d; var i; var j; var k; "
                         "var n; var m; var x; var y; var z; var t; var f; "
                         "var fd; var r; var val; var p; var sz; var fmt; "
                         "var c1; var c2; var __deref_p;";

} // namespace

TEST_CASE("BITVECTOR gen") {
  CHECK(gen_on(gen_bitvector, kAll, "x := x bitand (x - 1)") == names({"x"}));
  CHECK(gen_on(gen_bitvector, kAll, "y := x").empty());
  CHECK(gen_on(gen_bitvector, kAll,
               "if (x != 0) then t := y bitor z else skip") ==
        names({"t", "y", "z"}));
}

TEST_CASE("LINEAR gen and its helper") {
  CHECK(gen_on(gen_linear, kAll, "x := x bitand (x - 1)",
               names({"x", "y", "n"})) == names({"x"}));
  CHECK(gen_on(gen_linear, kAll, "y := x", names({"y", "n"})) == names({"y"}));
  CHECK(gen_on(gen_linear, kAll, "n := 10 * n + 3", names({"n"})).empty());

  Program p = parse_wrapped(kAll, "x := n * y");
  CHECK_FALSE(is_linear(*p.functions[0].body->value, names({"n", "y"})));
  Program q = parse_wrapped(kAll, "x := n / 2");
  CHECK_FALSE(is_linear(*q.functions[0].body->value, names({"n"})));
}

TEST_CASE("COUNTER gen") {
  CHECK(gen_on(gen_counter, kAll, "n := n + 1").empty());
  CHECK(gen_on(gen_counter, kAll, "y := x") == names({"y"}));
  CHECK(gen_on(gen_counter, kAll, "x := x bitand (x - 1)") == names({"x"}));
  // Only the stepped variable itself is spared.
  CHECK(gen_on(gen_counter, kAll, "m := n + 1") == names({"m"}));
  CHECK(gen_on(gen_counter, kAll, "n := 0").empty());
  CHECK(gen_on(gen_counter, kAll, "n := 5") == names({"n"}));
  CHECK(gen_on(gen_counter, kAll, "n := n - 1").empty());
  CHECK(gen_on(gen_counter, kAll, "n := 1 + n").empty());
}

TEST_CASE("CONST_ASSIGN gen") {
  CHECK(gen_on(gen_const_assign, kAll, "x := 5").empty());
  CHECK(gen_on(gen_const_assign, kAll, "x := y + 1", names({"y"})).empty());
  CHECK(gen_on(gen_const_assign, kAll, "x := y + 1", {}) == names({"x"}));
}

TEST_CASE("BOOL gen") {
  CHECK(gen_on(gen_bool, kAll, "f := 1").empty());
  CHECK(gen_on(gen_bool, kAll, "if (x > 0) then f := 1 else f := 0").empty());
  CHECK(gen_on(gen_bool, kAll, "y := x + 1") == names({"x", "y"}));
}

TEST_CASE("CHAR gen") {
  CHECK(gen_on(gen_char, kAll, "c2 := c1", names({"c1"})) == names({"c2"}));
  CHECK(gen_on(gen_char, kAll, "call isdigit(r, c)") == names({"c"}));
  CHECK(gen_on(gen_char, kAll, "c := 'a'") == names({"c"}));
  // tolower marks the result slot and the argument.
  CHECK(gen_on(gen_char, kAll, "call tolower(c2, c1)") == names({"c1", "c2"}));
  CHECK(gen_on(gen_char, kAll, "call getchar(c)") == names({"c"}));
}

TEST_CASE("FILE_DESCR gen") {
  CHECK(gen_on(gen_file_descr, kAll, "call open(fd, p, f)") == names({"fd"}));
  CHECK(gen_on(gen_file_descr, kAll, "call read(r, fd, ref c, 1)") ==
        names({"fd"}));
  CHECK(gen_on(gen_file_descr, kAll, "call close(r, fd)").empty());
  // Arity conditions: open takes 2 or 3 source arguments.
  CHECK(gen_on(gen_file_descr, kAll, "call open(fd, p, f, m)") == names({"fd"}));
  CHECK(gen_on(gen_file_descr, kAll, "call open(fd, p, f, m, x)").empty());
  CHECK(gen_on(gen_file_descr, kAll, "call read(r, fd, ref c)").empty());
}

TEST_CASE("ARRAY_INDEX gen") {
  CHECK(gen_on(gen_array_index, kAll, "a[i] := 0") == names({"i"}));
  CHECK(gen_on(gen_array_index, kAll, "x := a[j]") == names({"j"}));
  CHECK(gen_on(gen_array_index, kAll, "x := a[i + 1]").empty());
}

TEST_CASE("ARRAY_SIZE gen") {
  CHECK(gen_on(gen_array_size, kAll, "call malloc(p, sz)") == names({"sz"}));
  CHECK(gen_on(gen_array_size, kAll, "call malloc(p, 4 * k)").empty());
  CHECK(gen_on(gen_array_size, kAll, "call calloc(p, k)").empty());
}

TEST_CASE("UNRES_ASSIGN gen") {
  CHECK(gen_on(gen_unres_assign, kAll, "n := a[i]") == names({"n"}));
  CHECK(gen_on(gen_unres_assign, kAll, "n := __deref_p[0]") == names({"n"}));
  CHECK(gen_on(gen_unres_assign, kAll, "n := i + 1").empty());
  // Only a whole-rhs array read counts.
  CHECK(gen_on(gen_unres_assign, kAll, "n := a[i] + 1").empty());
}

TEST_CASE("OUTPUT gen") {
  // The format-string position is captured too when it is a variable.
  CHECK(gen_on(gen_output, kAll, "call printf(r, fmt, x, y)") ==
        names({"fmt", "x", "y"}));
  CHECK(gen_on(gen_output, kAll, "call fprintf(r, f, fmt, x)") ==
        names({"fmt", "x"}));
  CHECK(gen_on(gen_output, kAll, "call printf(r)").empty());
  CHECK(gen_on(gen_output, kAll, "call printf(r, 0, x)") == names({"x"}));
}

TEST_CASE("INPUT gen") {
  CHECK(gen_on(gen_input, kAll, "call read(r, fd, ref c, 1)") == names({"c"}));
  CHECK(gen_on(gen_input, kAll, "call foo(r, x)").empty());
  CHECK(gen_on(gen_input, kAll, "call scanf(r, fmt, ref a, ref b)") ==
        names({"a", "b"}));
}

TEST_CASE("BRANCH_COND gen") {
  CHECK(gen_on(gen_branch_cond, kAll, "if (x != 0) then x := 1") ==
        names({"x"}));
  CHECK(gen_on(gen_branch_cond, kAll,
               "while (x != 0) do { if (y > z) skip }") == names({"y", "z"}));
  CHECK(gen_on(gen_branch_cond, kAll, "skip").empty());
}

TEST_CASE("USED_IN_ARITHM gen") {
  CHECK(gen_on(gen_used_in_arithm, kAll, "val := 10 * val + (c - 48)") ==
        names({"val", "c"}));
  CHECK(gen_on(gen_used_in_arithm, kAll, "x := y bitand z").empty());
  CHECK(gen_on(gen_used_in_arithm, kAll, "if (x + 1 > 0) skip") ==
        names({"x"}));
}

TEST_CASE("LOOP_IT gen") {
  CHECK(gen_on(gen_loop_it, kAll,
               "while (x != 0) do { n := n + 1; x := x bitand (x - 1); }") ==
        names({"x"}));
  CHECK(gen_on(gen_loop_it, kAll,
               "while (i < n) do { a[i] := 0; i := i + 1; }") == names({"i"}));
  CHECK(gen_on(gen_loop_it, kAll, "while (x > 0) do skip").empty());
}

TEST_CASE("SYNT_CONST gen") {
  CHECK(gen_on(gen_synt_const, kAll, "n := 0") == names({"n"}));
  CHECK(gen_on(gen_synt_const, kAll, "skip").empty());
  CHECK(gen_on(gen_synt_const, kAll, "call p(r, x)").empty());
}

TEST_CASE("stdlib table contains exactly the recognized functions") {
  const std::set<std::string> expected = {
      "open",    "read",    "write",   "malloc",  "printf",  "sprintf",
      "fprintf", "getchar", "getc",    "fgetc",   "tolower", "toupper",
      "putchar", "isalnum", "isblank", "iscntrl", "isdigit", "isgraph",
      "islower", "isprint", "ispunct", "isspace", "isupper", "isxdigit"};
  std::set<std::string> actual;
  for (const auto& [name, rules] : stdlib_table()) actual.insert(name);
  CHECK(actual == expected);
}

TEST_CASE("catalog covers all roles with the right families") {
  const auto& catalog = full_catalog();
  REQUIRE(catalog.size() == kRoleCount);
  for (int i = 0; i < kRoleCount; ++i)
    CHECK(catalog[i].role == static_cast<RoleId>(i));

  auto spec_of = [&](RoleId r) { return catalog[ordinal(r)]; };
  CHECK(family_name(spec_of(RoleId::Bitvector)) == "one-run positive");
  CHECK(family_name(spec_of(RoleId::Linear)) == "fixed-point negative");
  CHECK(family_name(spec_of(RoleId::Char)) == "fixed-point positive");
  CHECK(family_name(spec_of(RoleId::SyntConst)) == "one-run negative");
  for (const AnalysisSpec& spec : catalog) {
    CHECK_FALSE(spec.description.empty());
    // Positive roles accumulate from nothing; negative roles subtract
    // from everything. No other pairing exists.
    CHECK((spec.init == InitKind::EmptySet) ==
          (spec.combine == CombineOp::Union));
  }
}

TEST_CASE("helpers never invent variables absent from the term") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    Function f = rolescope::testing::random_function(rng);
    const VarSet universe = all_vars(*f.body);
    const VarSet res = declared_vars(f);
    auto subset_of_universe = [&](const VarSet& s) {
      for (const VarName& v : s)
        if (!universe.contains(v)) return false;
      return true;
    };
    CHECK(subset_of_universe(assignment_targets(*f.body)));
    for (const AnalysisSpec& spec : full_catalog()) {
      CHECK(subset_of_universe(spec.gen(*f.body, res)));
      CHECK(subset_of_universe(spec.gen(*f.body, {})));
    }
  }
}
