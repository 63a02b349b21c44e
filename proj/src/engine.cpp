#include "rolescope/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rolescope {

std::string_view family_name(const AnalysisSpec& spec) {
  const bool positive = spec.combine == CombineOp::Union;
  if (spec.mode == EvalMode::OneRun)
    return positive ? "one-run positive" : "one-run negative";
  return positive ? "fixed-point positive" : "fixed-point negative";
}

namespace {

VarSet combine(CombineOp op, const VarSet& init, const VarSet& generated) {
  VarSet out;
  if (op == CombineOp::Union) {
    out = init;
    out.insert(generated.begin(), generated.end());
  } else {
    std::set_difference(init.begin(), init.end(), generated.begin(),
                        generated.end(), std::inserter(out, out.begin()));
  }
  return out;
}

} // namespace

EvalResult evaluate(const AnalysisSpec& spec, const Function& f) {
  const VarSet init =
      spec.init == InitKind::AllVars ? declared_vars(f) : VarSet{};

  if (spec.mode == EvalMode::OneRun) {
    return {combine(spec.combine, init, spec.gen(*f.body, init)), 1};
  }

  // Kleene iteration from Init; the powerset lattice is finite and every
  // catalog gen is monotone, so |Vars| + 1 iterations always suffice.
  const int cap = static_cast<int>(declared_vars(f).size()) + 2;
  VarSet res = init;
  int iterations = 0;
  for (;;) {
    ++iterations;
    VarSet next = combine(spec.combine, init, spec.gen(*f.body, res));
    if (next == res) break;
    res = std::move(next);
    if (iterations > cap)
      throw std::runtime_error(
          std::string("analysis did not stabilize: ") +
          std::string(role_name(spec.role)) + " on function " + f.name);
  }
  return {std::move(res), iterations};
}

RoleAssignment analyze_function(const Function& f,
                                const std::vector<AnalysisSpec>& catalog) {
  std::set<RoleId> seen;
  for (const AnalysisSpec& spec : catalog)
    if (!seen.insert(spec.role).second)
      throw std::invalid_argument("catalog lists role " +
                                  std::string(role_name(spec.role)) +
                                  " more than once");

  RoleAssignment out;
  out.function = f.name;
  for (const VarName& v : declared_vars(f)) out.roles[v] = {};

  for (const AnalysisSpec& spec : catalog) {
    EvalResult r;
    try {
      r = evaluate(spec, f);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(role_name(spec.role)) + ": " +
                               e.what());
    }
    out.iterations[spec.role] = r.iterations;
    for (const VarName& v : r.result) out.roles[v].insert(spec.role);
  }
  return out;
}

std::vector<RoleAssignment> analyze_program(
    const Program& p, const std::vector<AnalysisSpec>& catalog) {
  std::vector<RoleAssignment> out;
  out.reserve(p.functions.size());
  for (const Function& f : p.functions)
    out.push_back(analyze_function(f, catalog));
  return out;
}

} // namespace rolescope
