#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rolescope/c_frontend.hpp"
#include "rolescope/catalog.hpp"
#include "rolescope/classifier.hpp"
#include "rolescope/metrics.hpp"
#include "rolescope/parallel.hpp"
#include "rolescope/parser.hpp"
#include "rolescope/report.hpp"

namespace fs = std::filesystem;
using namespace rolescope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

enum class Lang { Auto, C, Csimpl };

Lang lang_from_string(const std::string& s) {
  if (s == "c") return Lang::C;
  if (s == "csimpl") return Lang::Csimpl;
  return Lang::Auto;
}

// Returns nullopt when the extension decides nothing.
std::optional<Lang> detect_lang(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".c") return Lang::C;
  if (ext == ".csimpl") return Lang::Csimpl;
  return std::nullopt;
}

Program load_program(const fs::path& path, Lang lang,
                     std::string* notes = nullptr) {
  const std::string src = read_file(path);
  if (lang == Lang::Auto) {
    auto detected = detect_lang(path);
    if (!detected)
      throw std::runtime_error("cannot detect language of " + path.string() +
                               "; pass --lang");
    lang = *detected;
  }
  if (lang == Lang::C) {
    LoweredProgram lowered = lower_c(src);
    if (notes) {
      for (const LoweringReport& report : lowered.reports)
        for (const auto& [line, what] : report.skipped_constructs)
          *notes += "note: " + path.string() + ":" + std::to_string(line) +
                    ": skipped " + what + " (" + report.function + ")\n";
    }
    return std::move(lowered.program);
  }
  return parse_program(src);
}

// Parses a --roles list; prints valid names and exits with a usage error
// on an unknown role.
std::vector<RoleId> parse_role_list(const std::string& spec) {
  std::vector<RoleId> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto role = role_from_name(item);
    if (!role) {
      std::ostringstream valid;
      for (RoleId r : all_roles()) valid << ' ' << role_name(r);
      throw CLI::ValidationError("--roles", "unknown role '" + item +
                                                "'; valid names:" + valid.str());
    }
    out.push_back(*role);
  }
  return out;
}

std::vector<LabelRule> load_label_rules(const std::string& path) {
  std::vector<LabelRule> rules;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    LabelRule rule;
    if (ls >> rule.glob >> rule.category) rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<LabeledExample> read_examples_csv(const std::string& path) {
  return from_csv(read_file(path));
}

std::string format_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_error_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

// --- subcommands ---------------------------------------------------------

int cmd_analyze(const std::vector<std::string>& paths, const std::string& lang,
                const std::string& roles, const std::string& format,
                bool emit_csimpl, int threads) {
  std::vector<RoleId> selected;
  if (roles.empty())
    for (RoleId r : all_roles()) selected.push_back(r);
  else
    selected = parse_role_list(roles);
  const auto catalog = catalog_subset(selected);

  std::vector<std::string> sorted_paths = paths;
  std::sort(sorted_paths.begin(), sorted_paths.end());

  struct Slot {
    std::string output;
    std::string notes;
    std::string error;
  };
  std::vector<Slot> slots(sorted_paths.size());

  parallel_for(sorted_paths.size(), threads, [&](size_t i) {
    try {
      Program program = load_program(sorted_paths[i], lang_from_string(lang),
                                     &slots[i].notes);
      if (emit_csimpl) {
        slots[i].output = pretty_print(program);
        return;
      }
      auto assignments = analyze_program(program, catalog);
      slots[i].output =
          format == "text"
              ? report_to_text(sorted_paths[i], program, assignments)
              : report_to_json(sorted_paths[i], program, assignments);
    } catch (const std::exception& e) {
      slots[i].error = sorted_paths[i] + ": " + e.what();
    }
  });

  bool failed = false;
  if (format == "json" && !emit_csimpl) {
    std::cout << "[";
    bool first = true;
    for (const Slot& s : slots) {
      if (s.output.empty()) continue;
      std::cout << (first ? "\n" : ",\n") << s.output;
      first = false;
    }
    std::cout << (first ? "]" : "\n]") << "\n";
  } else {
    for (const Slot& s : slots)
      if (!s.output.empty()) std::cout << s.output;
  }
  for (const Slot& s : slots) {
    if (!s.notes.empty()) std::cerr << s.notes;
    if (!s.error.empty()) {
      std::cerr << "error: " << s.error << "\n";
      failed = true;
    }
  }
  return failed ? kExitData : kExitOk;
}

int cmd_roles_list() {
  for (const AnalysisSpec& spec : full_catalog()) {
    std::printf("%-15s %-21s %s\n", std::string(role_name(spec.role)).c_str(),
                std::string(family_name(spec)).c_str(),
                std::string(spec.description).c_str());
  }
  return kExitOk;
}

int cmd_vectorize(const std::string& root, const std::string& labels_path,
                  const std::string& out_path, int threads) {
  std::vector<LabelRule> rules;
  if (!labels_path.empty()) rules = load_label_rules(labels_path);
  CorpusIngest corpus = ingest_corpus(root, rules, threads);
  if (corpus.examples.empty())
    std::cerr << "warning: no analyzable files under " << root << "\n";
  for (const auto& [path, reason] : corpus.skipped)
    std::cerr << "skipped " << path << ": " << reason << "\n";
  write_file(out_path, to_csv(corpus.examples));
  return kExitOk;
}

int cmd_train(const std::string& csv_path, const std::string& out_path,
              std::uint64_t seed, const Hyperparams& hyper) {
  auto examples = read_examples_csv(csv_path);
  Model model;
  try {
    model = train(std::move(examples), seed, hyper);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  write_file(out_path, model_to_json(model));
  return kExitOk;
}

int cmd_predict(const std::string& model_path,
                const std::vector<std::string>& paths,
                const std::string& lang) {
  Model model = model_from_json(read_file(model_path));
  std::vector<std::string> sorted_paths = paths;
  std::sort(sorted_paths.begin(), sorted_paths.end());
  bool failed = false;
  for (const std::string& path : sorted_paths) {
    try {
      Program program = load_program(path, lang_from_string(lang));
      auto assignments = analyze_program(program, full_catalog());
      RoleVector v = vectorize(assignments, path);
      if (v.empty_warning)
        std::cerr << "warning: " << path << " declares no variables\n";
      PredictionRanking ranking = predict(model, v);
      std::cout << path << "\n";
      for (const auto& [label, prob] : ranking.ranked) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", prob);
        std::cout << "  " << label << " " << buf << "\n";
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? kExitData : kExitOk;
}

int cmd_eval(const std::string& csv_path, const std::string& fractions_spec,
             int trials, std::uint64_t seed, const Hyperparams& hyper) {
  auto examples = read_examples_csv(csv_path);
  std::vector<double> fractions;
  std::stringstream ss(fractions_spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) fractions.push_back(std::stod(item));
  if (fractions.empty())
    throw CLI::ValidationError("--train-fraction", "no fractions given");

  std::cout << "train_fraction\ttop1_error\ttop2_error\ttop1_std\ttop2_std\n";
  for (double fraction : fractions) {
    SplitEval eval = evaluate_split(examples, fraction, trials, seed, hyper);
    std::cout << format_fraction(fraction) << '\t'
              << format_error_pct(eval.top1_mean) << '\t'
              << format_error_pct(eval.top2_mean) << '\t'
              << format_error_pct(eval.top1_std) << '\t'
              << format_error_pct(eval.top2_std) << "\n";
  }
  return kExitOk;
}

int cmd_chart(const std::string& csv_path, const std::string& labels_spec,
              const std::string& out_path) {
  auto examples = read_examples_csv(csv_path);

  std::vector<std::string> labels;
  if (!labels_spec.empty()) {
    std::stringstream ss(labels_spec);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) labels.push_back(item);
  } else {
    for (const LabeledExample& ex : examples)
      if (std::find(labels.begin(), labels.end(), ex.label) == labels.end())
        labels.push_back(ex.label);
    std::sort(labels.begin(), labels.end());
  }

  std::map<std::string, std::pair<std::array<double, kRoleCount>, int>> agg;
  for (const std::string& label : labels) agg[label] = {{}, 0};
  for (const LabeledExample& ex : examples) {
    auto it = agg.find(ex.label);
    if (it == agg.end()) continue;
    for (int i = 0; i < kRoleCount; ++i)
      it->second.first[i] += ex.vector.percentages[i];
    it->second.second++;
  }
  for (const std::string& label : labels)
    if (agg[label].second == 0)
      std::cerr << "warning: category '" << label
                << "' has no files; charting zeros\n";

  std::ostringstream out;
  out << "role";
  for (const std::string& label : labels) out << '\t' << label;
  out << '\n';
  for (RoleId r : all_roles()) {
    out << role_name(r);
    for (const std::string& label : labels) {
      const auto& [sums, count] = agg[label];
      const double mean = count > 0 ? sums[ordinal(r)] / count : 0.0;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", mean);
      out << '\t' << buf;
    }
    out << '\n';
  }
  write_file(out_path, out.str());
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-role analysis and classification for C-like sources"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "infer roles per file");
  std::vector<std::string> analyze_paths;
  std::string analyze_lang, analyze_roles, analyze_format = "json";
  bool emit_csimpl = false;
  int analyze_threads = 0;
  analyze->add_option("paths", analyze_paths, "source files")->required();
  analyze->add_option("--lang", analyze_lang, "c or csimpl (default: by extension)")
      ->check(CLI::IsMember({"c", "csimpl"}));
  analyze->add_option("--roles", analyze_roles, "comma-separated role subset");
  analyze->add_option("--format", analyze_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  analyze->add_flag("--emit-csimpl", emit_csimpl,
                    "print the lowered program instead of a report");
  analyze->add_option("--threads", analyze_threads, "worker cap (0 = auto)");

  // roles
  auto* roles = app.add_subcommand("roles", "role catalog");
  auto* roles_list = roles->add_subcommand("list", "list all roles");
  roles->require_subcommand(1);

  // vectorize
  auto* vectorize_cmd =
      app.add_subcommand("vectorize", "build per-file role vectors");
  std::string vec_root, vec_labels, vec_out;
  int vec_threads = 0;
  vectorize_cmd->add_option("root", vec_root, "corpus directory")->required();
  vectorize_cmd->add_option("--labels", vec_labels,
                            "label map file: '<glob> <category>' per line");
  vectorize_cmd->add_option("-o,--output", vec_out, "output CSV (default stdout)");
  vectorize_cmd->add_option("--threads", vec_threads, "worker cap (0 = auto)");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a classifier");
  std::string train_csv, train_out = "model.json";
  std::uint64_t train_seed = 42;
  Hyperparams train_hyper;
  train_cmd->add_option("vectors", train_csv, "vectors CSV")->required();
  train_cmd->add_option("-o,--output", train_out, "model file");
  train_cmd->add_option("--seed", train_seed, "random seed");
  train_cmd->add_option("--epochs", train_hyper.epochs, "training epochs");
  train_cmd->add_option("--learning-rate", train_hyper.learning_rate,
                        "gradient step size");
  train_cmd->add_option("--l2", train_hyper.l2, "ridge penalty");

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "rank categories for files");
  std::string predict_model, predict_lang;
  std::vector<std::string> predict_paths;
  predict_cmd->add_option("model", predict_model, "model JSON")->required();
  predict_cmd->add_option("paths", predict_paths, "source files")->required();
  predict_cmd->add_option("--lang", predict_lang, "c or csimpl")
      ->check(CLI::IsMember({"c", "csimpl"}));

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "train/test error across split sizes");
  std::string eval_csv, eval_fractions = "0.9,0.8,0.7,0.6,0.5";
  int eval_trials = 20;
  std::uint64_t eval_seed = 42;
  Hyperparams eval_hyper;
  eval_cmd->add_option("vectors", eval_csv, "vectors CSV")->required();
  eval_cmd->add_option("--train-fraction", eval_fractions,
                       "comma-separated training fractions");
  eval_cmd->add_option("--trials", eval_trials, "trials per fraction");
  eval_cmd->add_option("--seed", eval_seed, "random seed");
  eval_cmd->add_option("--epochs", eval_hyper.epochs, "training epochs");
  eval_cmd->add_option("--learning-rate", eval_hyper.learning_rate,
                       "gradient step size");
  eval_cmd->add_option("--l2", eval_hyper.l2, "ridge penalty");

  // chart
  auto* chart_cmd =
      app.add_subcommand("chart", "mean role percentages per category");
  std::string chart_csv, chart_labels, chart_out;
  bool by_label = true;
  chart_cmd->add_option("vectors", chart_csv, "vectors CSV")->required();
  chart_cmd->add_flag("--by-label", by_label, "group by category (default)");
  chart_cmd->add_option("--labels", chart_labels,
                        "comma-separated category columns");
  chart_cmd->add_option("-o,--output", chart_out, "output TSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (analyze->parsed())
      return cmd_analyze(analyze_paths, analyze_lang, analyze_roles,
                         analyze_format, emit_csimpl, analyze_threads);
    if (roles_list->parsed()) return cmd_roles_list();
    if (vectorize_cmd->parsed())
      return cmd_vectorize(vec_root, vec_labels, vec_out, vec_threads);
    if (train_cmd->parsed())
      return cmd_train(train_csv, train_out, train_seed, train_hyper);
    if (predict_cmd->parsed())
      return cmd_predict(predict_model, predict_paths, predict_lang);
    if (eval_cmd->parsed())
      return cmd_eval(eval_csv, eval_fractions, eval_trials, eval_seed,
                      eval_hyper);
    if (chart_cmd->parsed())
      return cmd_chart(chart_csv, chart_labels, chart_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
