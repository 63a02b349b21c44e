#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "rolescope/ast.hpp"
#include "rolescope/roles.hpp"

// Generic analysis evaluator. Each role is an instance of the same scheme:
//
//   Res = Init  <combine>  gen(body, Res)
//
// computed either in one pass or iterated to a fixpoint. The combine
// operation is set union for positive roles (evidence accumulates from an
// empty start) and set minus for negative roles (violators are removed
// from the full variable set).

namespace rolescope {

enum class InitKind { EmptySet, AllVars };
enum class CombineOp { Union, SetMinus };
enum class EvalMode { OneRun, FixedPoint };

using GenFn = std::function<VarSet(const Stmt&, const VarSet&)>;

struct AnalysisSpec {
  RoleId role{};
  InitKind init = InitKind::EmptySet;
  CombineOp combine = CombineOp::Union;
  EvalMode mode = EvalMode::OneRun;
  GenFn gen;
  std::string_view description; // one-line informal definition
};

std::string_view family_name(const AnalysisSpec& spec);

struct EvalResult {
  VarSet result;
  int iterations = 0; // number of gen evaluations
};

// OneRun: a single gen pass over the body. FixedPoint: recompute from Init
// until the result set stops changing. Throws std::runtime_error if the
// iteration count exceeds |Vars| + 2, which a monotone gen cannot reach.
EvalResult evaluate(const AnalysisSpec& spec, const Function& f);

struct RoleAssignment {
  std::string function;
  std::map<VarName, std::set<RoleId>> roles; // every declared var has a key
  std::map<RoleId, int> iterations;
};

// Runs every catalog entry on one function. The catalog must name each
// role at most once.
RoleAssignment analyze_function(const Function& f,
                                const std::vector<AnalysisSpec>& catalog);

std::vector<RoleAssignment> analyze_program(
    const Program& p, const std::vector<AnalysisSpec>& catalog);

} // namespace rolescope
