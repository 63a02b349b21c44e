// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 5-7 run on synthetic corpora generated fresh (seeded)
// into a scratch directory; criterion 7 drives the installed CLI binary.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rolescope/c_frontend.hpp"
#include "rolescope/catalog.hpp"
#include "rolescope/classifier.hpp"
#include "rolescope/metrics.hpp"
#include "rolescope/parser.hpp"

#include "support/oracle.hpp"
#include "support/random_program.hpp"

namespace fs = std::filesystem;
using namespace rolescope;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_detail;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) {
  return read_file(fs::path(RS_FIXTURE_DIR) / name);
}

// --- synthetic corpus ------------------------------------------------------

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string bitops_file(std::mt19937_64& rng) {
  const int nv = pick(rng, 3, 6);
  std::ostringstream out;
  out << "begin proc f() begin\n";
  for (int i = 0; i < nv; ++i) out << "var bv" << i << ";\n";
  auto var = [&](int i) { return "bv" + std::to_string(i % nv); };
  const int stmts = pick(rng, nv, nv + 3);
  for (int s = 0; s < stmts; ++s) {
    const int i = pick(rng, 0, nv - 1);
    switch (pick(rng, 0, 3)) {
      case 0:
        out << var(i) << " := " << var(i) << " bitand (" << var(i + 1)
            << " - 1);\n";
        break;
      case 1:
        out << var(i) << " := " << var(i + 1) << " bitor " << var(i + 2)
            << ";\n";
        break;
      case 2:
        out << var(i) << " := bitnot " << var(i + 1) << ";\n";
        break;
      default:
        out << var(i) << " := " << var(i + 1) << " bitxor "
            << pick(rng, 1, 255) << ";\n";
        break;
    }
  }
  if (pick(rng, 0, 1))
    out << "while (bv0 != 0) { bv0 := bv0 bitand (bv0 - 1); }\n";
  out << "end end\n";
  return out.str();
}

std::string counting_file(std::mt19937_64& rng) {
  const int nc = pick(rng, 2, 4);
  std::ostringstream out;
  out << "begin proc f() begin\n";
  for (int i = 0; i < nc; ++i) out << "var n" << i << ";\n";
  out << "var flag;\nvar lim;\n";
  for (int i = 0; i < nc; ++i) out << "n" << i << " := 0;\n";
  out << "while (n0 < lim) { n0 := n0 + 1; }\n";
  for (int i = 1; i < nc; ++i) {
    if (pick(rng, 0, 1))
      out << "while (n" << i << " < lim) { n" << i << " := n" << i
          << " + 1; }\n";
    else
      out << "n" << i << " := n" << i << (pick(rng, 0, 1) ? " + 1" : " - 1")
          << ";\n";
  }
  out << "if (n0 > lim) { flag := 1; } else { flag := 0; }\n";
  if (pick(rng, 0, 1)) out << "if (flag = 1) { n0 := 0; }\n";
  out << "end end\n";
  return out.str();
}

std::string io_file(std::mt19937_64& rng) {
  std::ostringstream out;
  out << "begin proc g() begin\n";
  out << "var fd;\nvar c;\nvar val;\nvar r1;\nvar r2;\nvar path;\nvar flags;\n";
  out << "var fmt;\n";
  out << "call open(fd, path, flags);\n";
  const int reads = pick(rng, 1, 3);
  for (int i = 0; i < reads; ++i)
    out << "call read(r1, fd, ref c, 1);\n";
  if (pick(rng, 0, 1)) out << "call isdigit(r2, c);\n";
  out << "val := 0;\n";
  out << "val := 10 * val + (c - " << pick(rng, 32, 64) << ");\n";
  if (pick(rng, 0, 1)) out << "call printf(r2, fmt, val);\n";
  if (pick(rng, 0, 2) == 0) out << "call write(r2, fd, ref c, 1);\n";
  out << "end end\n";
  return out.str();
}

void write_corpus(const fs::path& root, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  fs::create_directories(root / "bitops");
  fs::create_directories(root / "counting");
  fs::create_directories(root / "io");
  for (int i = 0; i < 50; ++i) {
    std::ofstream(root / "bitops" / ("b" + std::to_string(i) + ".csimpl"))
        << bitops_file(rng);
    std::ofstream(root / "counting" / ("c" + std::to_string(i) + ".csimpl"))
        << counting_file(rng);
    std::ofstream(root / "io" / ("i" + std::to_string(i) + ".csimpl"))
        << io_file(rng);
  }
}

// Overlapping clusters in role-vector space; errors are real but the
// classes remain learnable, so the learning curve is visible.
std::vector<LabeledExample> noisy_vector_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wide(-20.0, 20.0);
  std::uniform_real_distribution<double> narrow(0.0, 12.0);
  const std::array<std::pair<RoleId, RoleId>, 3> hot = {{
      {RoleId::Bitvector, RoleId::UsedInArithm},
      {RoleId::Counter, RoleId::UsedInArithm},
      {RoleId::FileDescr, RoleId::Bitvector},
  }};
  std::vector<LabeledExample> out;
  for (int label = 0; label < 3; ++label) {
    for (int i = 0; i < 40; ++i) {
      RoleVector v;
      v.source = "noisy/" + std::to_string(label) + "/" + std::to_string(i);
      v.total_vars = 8;
      for (int d = 0; d < kRoleCount; ++d) v.percentages[d] = narrow(rng);
      auto bump = [&](RoleId r) {
        double& cell = v.percentages[ordinal(r)];
        cell = std::clamp(30.0 + 16.0 + wide(rng), 0.0, 100.0);
      };
      auto drift = [&](RoleId r) {
        double& cell = v.percentages[ordinal(r)];
        cell = std::clamp(30.0 + wide(rng), 0.0, 100.0);
      };
      for (int other = 0; other < 3; ++other) {
        if (other == label) continue;
        drift(hot[other].first);
        drift(hot[other].second);
      }
      bump(hot[label].first);
      bump(hot[label].second);
      out.push_back({std::move(v), "cat" + std::to_string(label)});
    }
  }
  return out;
}

// --- criteria ---------------------------------------------------------------

bool criterion1_bit_count() {
  const auto start = Clock::now();
  Program p = parse_program(fixture("count_bits.csimpl"));
  const Function& f = p.functions[0];
  const auto& catalog = full_catalog();

  EvalResult bv = evaluate(catalog[ordinal(RoleId::Bitvector)], f);
  EvalResult cnt = evaluate(catalog[ordinal(RoleId::Counter)], f);
  EvalResult lin = evaluate(catalog[ordinal(RoleId::Linear)], f);

  const bool values_ok = bv.result == VarSet{VarName("x")} &&
                         bv.iterations == 1 &&
                         cnt.result == VarSet{VarName("n")} &&
                         lin.result == VarSet{VarName("n")} &&
                         lin.iterations == 3;
  const double elapsed = seconds_since(start);
  if (!values_ok) g_detail = "role results differ from the expected trace";
  if (elapsed >= 1.0) g_detail = "runtime " + std::to_string(elapsed) + "s";
  return values_ok && elapsed < 1.0;
}

bool criterion2_digit_reader() {
  LoweredProgram lowered = lower_c(fixture("count_digits.c"));
  if (lowered.program.functions.size() != 1) {
    g_detail = "expected one lowered function";
    return false;
  }
  RoleAssignment a =
      analyze_function(lowered.program.functions[0], full_catalog());
  auto has = [&](const char* var, RoleId role) {
    auto it = a.roles.find(VarName(var));
    return it != a.roles.end() && it->second.contains(role);
  };
  const bool ok = has("fd", RoleId::FileDescr) && has("c", RoleId::Char) &&
                  has("c", RoleId::Input) && has("val", RoleId::Linear) &&
                  has("c", RoleId::Linear);
  if (!ok) g_detail = "fd/c/val roles differ from the expected sets";
  return ok;
}

bool criterion3_oracle() {
  std::mt19937_64 rng(1729);
  rolescope::testing::GenConfig cfg; // <= 4 vars, <= 8 statements
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Function f = rolescope::testing::random_function(rng, cfg);
    for (const AnalysisSpec& spec : full_catalog()) {
      const VarSet expected = rolescope::testing::oracle_result(spec.role, f);
      if (evaluate(spec, f).result != expected) {
        g_detail = "disagreement on " + std::string(role_name(spec.role)) +
                   " for program:\n" + pretty_print(*f.body);
        return false;
      }
      ++checked;
    }
  }
  g_detail = std::to_string(checked) + " evaluations agreed";
  return true;
}

bool criterion4_bounds() {
  std::mt19937_64 rng(1729);
  rolescope::testing::GenConfig cfg;
  for (int i = 0; i < 1000; ++i) {
    Function f = rolescope::testing::random_function(rng, cfg);
    const int bound = static_cast<int>(declared_vars(f).size()) + 1;
    for (const AnalysisSpec& spec : full_catalog()) {
      EvalResult r = evaluate(spec, f);
      if (spec.mode == EvalMode::OneRun && r.iterations != 1) {
        g_detail = "one-run role took " + std::to_string(r.iterations) +
                   " passes";
        return false;
      }
      if (spec.mode == EvalMode::FixedPoint && r.iterations > bound) {
        g_detail = std::string(role_name(spec.role)) + " took " +
                   std::to_string(r.iterations) + " > |Vars|+1 iterations";
        return false;
      }
    }
  }
  return true;
}

bool check_separation(const std::vector<LabeledExample>& examples) {
  std::map<std::string, std::pair<std::array<double, kRoleCount>, int>> agg;
  for (const LabeledExample& ex : examples) {
    auto& [sums, count] = agg[ex.label];
    for (int i = 0; i < kRoleCount; ++i) sums[i] += ex.vector.percentages[i];
    ++count;
  }
  std::vector<std::string> labels;
  for (auto& [label, _] : agg) labels.push_back(label);
  for (size_t a = 0; a < labels.size(); ++a) {
    for (size_t b = a + 1; b < labels.size(); ++b) {
      const auto& [sa, na] = agg[labels[a]];
      const auto& [sb, nb] = agg[labels[b]];
      int separated = 0;
      for (int i = 0; i < kRoleCount; ++i)
        if (std::abs(sa[i] / na - sb[i] / nb) >= 15.0) ++separated;
      if (separated < 3) {
        g_detail = labels[a] + " vs " + labels[b] + " separated on only " +
                   std::to_string(separated) + " roles";
        return false;
      }
    }
  }
  return true;
}

bool criterion5_classification(const fs::path& corpus_dir) {
  const auto start = Clock::now();
  write_corpus(corpus_dir, 42);
  CorpusIngest corpus = ingest_corpus(corpus_dir, {});
  if (corpus.examples.size() != 150 || !corpus.skipped.empty()) {
    g_detail = "corpus ingestion produced " +
               std::to_string(corpus.examples.size()) + " examples, " +
               std::to_string(corpus.skipped.size()) + " skipped";
    return false;
  }
  if (!check_separation(corpus.examples)) return false;

  SplitEval eval = evaluate_split(corpus.examples, 0.9, 20, 42);
  const double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "top1 %.2f%%, top2 %.2f%%, %.1fs for 150 files / 20 trials",
                100 * eval.top1_mean, 100 * eval.top2_mean, elapsed);
  g_detail = buf;
  return eval.top1_mean <= 0.15 && eval.top2_mean <= eval.top1_mean &&
         elapsed < 30.0;
}

bool criterion6_learning_curve() {
  auto corpus = noisy_vector_corpus(42);
  SplitEval at90 = evaluate_split(corpus, 0.9, 40, 42);
  SplitEval at50 = evaluate_split(corpus, 0.5, 40, 42);
  char buf[120];
  std::snprintf(buf, sizeof buf, "top1 %.2f%% at 0.5 vs %.2f%% at 0.9",
                100 * at50.top1_mean, 100 * at90.top1_mean);
  g_detail = buf;
  return at50.top1_mean >= at90.top1_mean;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RS_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

bool criterion7_determinism(const fs::path& corpus_dir, const fs::path& work) {
  fs::create_directories(work);
  for (const char* run : {"r1", "r2"}) {
    const std::string dir = (work / run).string();
    fs::create_directories(dir);
    if (run_cli("analyze " + (corpus_dir / "io" / "i0.csimpl").string() + " " +
                (corpus_dir / "bitops" / "b0.csimpl").string() + " > " + dir +
                "/analyze.json") != 0 ||
        run_cli("vectorize " + corpus_dir.string() + " -o " + dir +
                "/vectors.csv 2>/dev/null") != 0 ||
        run_cli("train " + dir + "/vectors.csv -o " + dir + "/model.json") !=
            0 ||
        run_cli("eval " + dir +
                "/vectors.csv --train-fraction 0.9,0.7,0.5 --trials 5 > " +
                dir + "/eval.txt") != 0) {
      g_detail = std::string("pipeline run ") + run + " failed";
      return false;
    }
  }
  for (const char* file :
       {"analyze.json", "vectors.csv", "model.json", "eval.txt"}) {
    const std::string a = read_file(work / "r1" / file);
    const std::string b = read_file(work / "r2" / file);
    if (a.empty() || a != b) {
      g_detail = std::string(file) + " differs between runs";
      return false;
    }
  }
  return true;
}

bool criterion8_roundtrip() {
  std::mt19937_64 rng(20260811);
  for (int i = 0; i < 1000; ++i) {
    Program p = rolescope::testing::random_program(rng);
    Program back = parse_program(pretty_print(p));
    if (!equal(back, p)) {
      g_detail = "mismatch for program:\n" + pretty_print(p);
      return false;
    }
  }
  return true;
}

} // namespace

int main() {
  const fs::path scratch =
      fs::temp_directory_path() /
      ("rolescope_acceptance_" + std::to_string(::getpid()));
  const fs::path corpus_dir = scratch / "corpus";
  fs::create_directories(corpus_dir);

  struct Criterion {
    int number;
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "bit-count fixture traces (exact, < 1 s)", criterion1_bit_count},
      {2, "digit-reader fixture roles (exact)", criterion2_digit_reader},
      {3, "oracle equivalence on 1000 random programs", criterion3_oracle},
      {4, "fixpoint bounds and one-run single pass", criterion4_bounds},
      {5, "classification on a separated synthetic corpus (< 30 s)",
       [&] { return criterion5_classification(corpus_dir); }},
      {6, "learning-curve monotonicity on the noisy corpus",
       criterion6_learning_curve},
      {7, "byte-identical pipeline outputs across runs",
       [&] { return criterion7_determinism(corpus_dir, scratch / "runs"); }},
      {8, "1000 random ASTs round-trip through the parser",
       criterion8_roundtrip},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    g_detail.clear();
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      g_detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", c.number,
                c.name, g_detail.empty() ? "" : " -- ", g_detail.c_str());
    std::fflush(stdout);
  }

  std::error_code ec;
  fs::remove_all(scratch, ec);
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
