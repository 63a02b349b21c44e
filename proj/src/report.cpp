#include "rolescope/report.hpp"

#include <sstream>

#include "json.hpp"

namespace rolescope {

namespace {

// Declaration order: params, then locals.
std::vector<VarName> ordered_vars(const Function& f) {
  std::vector<VarName> out = f.params;
  out.insert(out.end(), f.locals.begin(), f.locals.end());
  return out;
}

} // namespace

std::string report_to_json(const std::string& source, const Program& program,
                           const std::vector<RoleAssignment>& assignments) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["source"] = source;
  j["functions"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < program.functions.size(); ++i) {
    const Function& f = program.functions[i];
    const RoleAssignment& a = assignments[i];
    nlohmann::ordered_json jf;
    jf["name"] = f.name;
    jf["variables"] = nlohmann::ordered_json::array();
    for (const VarName& v : ordered_vars(f)) {
      nlohmann::ordered_json jv;
      jv["name"] = v.name;
      auto roles = nlohmann::ordered_json::array();
      auto it = a.roles.find(v);
      if (it != a.roles.end())
        for (RoleId r : it->second) roles.push_back(std::string(role_name(r)));
      jv["roles"] = std::move(roles);
      jf["variables"].push_back(std::move(jv));
    }
    nlohmann::ordered_json iters;
    for (const auto& [role, count] : a.iterations)
      iters[std::string(role_name(role))] = count;
    jf["iterations"] = std::move(iters);
    j["functions"].push_back(std::move(jf));
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const std::string& source, const Program& program,
                           const std::vector<RoleAssignment>& assignments) {
  std::ostringstream os;
  os << source << "\n";
  for (size_t i = 0; i < program.functions.size(); ++i) {
    const Function& f = program.functions[i];
    const RoleAssignment& a = assignments[i];
    os << "  " << f.name << "()\n";
    for (const VarName& v : ordered_vars(f)) {
      os << "    " << v.name << ":";
      auto it = a.roles.find(v);
      if (it == a.roles.end() || it->second.empty()) {
        os << " -";
      } else {
        for (RoleId r : it->second) os << ' ' << role_name(r);
      }
      os << "\n";
    }
  }
  return os.str();
}

} // namespace rolescope
