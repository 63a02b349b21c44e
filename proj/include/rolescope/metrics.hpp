#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rolescope/engine.hpp"
#include "rolescope/roles.hpp"

namespace rolescope {

// Per-file role frequencies. counts[r] is the number of distinct
// (function, variable) pairs holding role r; percentages are
// 100 * counts / total_vars, zero when the file declares no variables.
// Percentages do not sum to 100: one variable can hold several roles.
struct RoleVector {
  std::string source;
  std::array<int, kRoleCount> counts{};
  int total_vars = 0;
  std::array<double, kRoleCount> percentages{};
  bool empty_warning = false; // set when total_vars == 0
};

RoleVector vectorize(const std::vector<RoleAssignment>& assignments,
                     const std::string& source);

struct LabeledExample {
  RoleVector vector;
  std::string label;
};

// First matching glob wins, in list order. '*' and '?' do not cross '/';
// '**' does.
struct LabelRule {
  std::string glob;
  std::string category;
};

bool glob_match(std::string_view pattern, std::string_view path);

struct CorpusIngest {
  std::vector<LabeledExample> examples; // sorted by path
  std::vector<std::pair<std::string, std::string>> skipped; // path, reason
};

// Analyzes every .c/.csimpl file under root. With no labeling rules, the
// label is the first directory component of the path relative to root
// ("unlabeled" for files directly in root). Unparseable files are skipped
// and reported, never silently dropped.
CorpusIngest ingest_corpus(const std::filesystem::path& root,
                           const std::vector<LabelRule>& labeling,
                           int threads = 0);

// CSV with a fixed 19-column schema: path, label, total_vars, then one
// percentage column per role in RoleId order. Two fraction digits, LF
// line endings.
std::string to_csv(const std::vector<LabeledExample>& examples);

// Throws std::runtime_error on a schema mismatch.
std::vector<LabeledExample> from_csv(const std::string& csv);

std::string csv_header();

} // namespace rolescope
