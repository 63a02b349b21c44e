#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace rolescope {

// Closed enumeration of the inferred variable roles. Ordinals are stable:
// serialization (CSV columns, model weights) relies on this order.
enum class RoleId : int {
  SyntConst = 0,
  ConstAssign,
  Counter,
  Linear,
  Bool,
  Input,
  Output,
  BranchCond,
  Bitvector,
  UnresAssign,
  Char,
  LoopIt,
  FileDescr,
  ArrayIndex,
  ArraySize,
  UsedInArithm,
};

inline constexpr int kRoleCount = 16;

constexpr int ordinal(RoleId r) { return static_cast<int>(r); }

std::array<RoleId, kRoleCount> all_roles();

// Canonical spelling, e.g. "SYNT_CONST", "USED_IN_ARITHM".
std::string_view role_name(RoleId r);

std::optional<RoleId> role_from_name(std::string_view name);

} // namespace rolescope
