#include "rolescope/roles.hpp"

namespace rolescope {

namespace {

constexpr std::array<std::string_view, kRoleCount> kNames = {
    "SYNT_CONST",   "CONST_ASSIGN", "COUNTER",     "LINEAR",
    "BOOL",         "INPUT",        "OUTPUT",      "BRANCH_COND",
    "BITVECTOR",    "UNRES_ASSIGN", "CHAR",        "LOOP_IT",
    "FILE_DESCR",   "ARRAY_INDEX",  "ARRAY_SIZE",  "USED_IN_ARITHM",
};

} // namespace

std::array<RoleId, kRoleCount> all_roles() {
  std::array<RoleId, kRoleCount> out{};
  for (int i = 0; i < kRoleCount; ++i) out[i] = static_cast<RoleId>(i);
  return out;
}

std::string_view role_name(RoleId r) { return kNames[ordinal(r)]; }

std::optional<RoleId> role_from_name(std::string_view name) {
  for (int i = 0; i < kRoleCount; ++i)
    if (kNames[i] == name) return static_cast<RoleId>(i);
  return std::nullopt;
}

} // namespace rolescope
