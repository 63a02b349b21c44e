#include "rolescope/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rolescope/c_frontend.hpp"
#include "rolescope/catalog.hpp"
#include "rolescope/parallel.hpp"
#include "rolescope/parser.hpp"

namespace rolescope {

RoleVector vectorize(const std::vector<RoleAssignment>& assignments,
                     const std::string& source) {
  RoleVector v;
  v.source = source;
  for (const RoleAssignment& fn : assignments) {
    for (const auto& [var, roles] : fn.roles) {
      ++v.total_vars;
      for (RoleId r : roles) ++v.counts[ordinal(r)];
    }
  }
  if (v.total_vars == 0) {
    v.empty_warning = true;
    return v;
  }
  for (int i = 0; i < kRoleCount; ++i)
    v.percentages[i] = 100.0 * v.counts[i] / v.total_vars;
  return v;
}

bool glob_match(std::string_view pattern, std::string_view path) {
  // Iterative fnmatch with one backtrack point per star.
  size_t p = 0, s = 0;
  size_t star_p = std::string_view::npos, star_s = 0;
  bool star_crosses = false;
  while (s < path.size()) {
    if (p < pattern.size() &&
        (pattern[p] == path[s] || (pattern[p] == '?' && path[s] != '/'))) {
      ++p;
      ++s;
      continue;
    }
    if (p < pattern.size() && pattern[p] == '*') {
      const bool double_star = p + 1 < pattern.size() && pattern[p + 1] == '*';
      star_crosses = double_star;
      p += double_star ? 2 : 1;
      star_p = p;
      star_s = s;
      continue;
    }
    if (star_p != std::string_view::npos &&
        (star_crosses || path[star_s] != '/')) {
      p = star_p;
      s = ++star_s;
      continue;
    }
    return false;
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

namespace {

std::string default_label(const std::filesystem::path& relative) {
  auto it = relative.begin();
  if (it == relative.end()) return "unlabeled";
  std::filesystem::path first = *it;
  if (++it == relative.end()) return "unlabeled"; // file directly in root
  return first.generic_string();
}

std::string label_for(const std::string& relative,
                      const std::vector<LabelRule>& labeling,
                      const std::filesystem::path& rel_path) {
  for (const LabelRule& rule : labeling)
    if (glob_match(rule.glob, relative)) return rule.category;
  if (!labeling.empty()) return "unlabeled";
  return default_label(rel_path);
}

} // namespace

CorpusIngest ingest_corpus(const std::filesystem::path& root,
                           const std::vector<LabelRule>& labeling,
                           int threads) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec))
    throw std::runtime_error("corpus root is not a directory: " +
                             root.string());

  std::vector<std::filesystem::path> files;
  for (auto it = std::filesystem::recursive_directory_iterator(root);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    auto ext = it->path().extension().string();
    if (ext == ".c" || ext == ".csimpl") files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());

  struct Slot {
    bool ok = false;
    bool io_failed = false;
    LabeledExample example;
    std::string error;
  };
  std::vector<Slot> slots(files.size());

  parallel_for(files.size(), threads, [&](size_t i) {
    const std::filesystem::path& file = files[i];
    const std::filesystem::path rel = std::filesystem::relative(file, root);
    const std::string rel_str = rel.generic_string();
    Slot& slot = slots[i];
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      slot.io_failed = true;
      return;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
      slot.io_failed = true;
      return;
    }
    try {
      Program program;
      if (file.extension() == ".csimpl") {
        program = parse_program(buffer.str());
      } else {
        program = lower_c(buffer.str()).program;
      }
      auto assignments = analyze_program(program, full_catalog());
      slot.example.vector = vectorize(assignments, rel_str);
      slot.example.label = label_for(rel_str, labeling, rel);
      slot.ok = true;
    } catch (const std::exception& e) {
      // Parse or lowering failure: the file is reported, not fatal.
      slot.error = e.what();
    }
  });

  CorpusIngest out;
  for (size_t i = 0; i < files.size(); ++i) {
    if (slots[i].io_failed)
      throw std::runtime_error("cannot read " + files[i].string());
    const std::string rel =
        std::filesystem::relative(files[i], root).generic_string();
    if (slots[i].ok)
      out.examples.push_back(std::move(slots[i].example));
    else
      out.skipped.emplace_back(rel, slots[i].error);
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

} // namespace

std::string csv_header() {
  std::string h = "path,label,total_vars";
  for (RoleId r : all_roles()) {
    h += ',';
    h += role_name(r);
  }
  return h;
}

std::string to_csv(const std::vector<LabeledExample>& examples) {
  std::string out = csv_header();
  out += '\n';
  for (const LabeledExample& ex : examples) {
    out += csv_field(ex.vector.source);
    out += ',';
    out += csv_field(ex.label);
    out += ',';
    out += std::to_string(ex.vector.total_vars);
    for (int i = 0; i < kRoleCount; ++i) {
      out += ',';
      out += format_pct(ex.vector.percentages[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<LabeledExample> from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header())
    throw std::runtime_error("unknown CSV schema: " + line);
  std::vector<LabeledExample> out;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3 + kRoleCount)
      throw std::runtime_error("CSV line " + std::to_string(line_no) +
                               ": expected " +
                               std::to_string(3 + kRoleCount) + " fields");
    LabeledExample ex;
    ex.vector.source = fields[0];
    ex.label = fields[1];
    ex.vector.total_vars = std::stoi(fields[2]);
    for (int i = 0; i < kRoleCount; ++i)
      ex.vector.percentages[i] = std::stod(fields[3 + i]);
    ex.vector.empty_warning = ex.vector.total_vars == 0;
    out.push_back(std::move(ex));
  }
  return out;
}

} // namespace rolescope
