#pragma once

#include <string>
#include <vector>

#include "rolescope/ast.hpp"
#include "rolescope/engine.hpp"

namespace rolescope {

// Analysis report for one source file, schema_version 1:
// {schema_version, source, functions: [{name, variables: [{name, roles}],
// iterations: {role: count}}]}. Variables appear in declaration order,
// roles in RoleId order.
std::string report_to_json(const std::string& source, const Program& program,
                           const std::vector<RoleAssignment>& assignments);

std::string report_to_text(const std::string& source, const Program& program,
                           const std::vector<RoleAssignment>& assignments);

} // namespace rolescope
