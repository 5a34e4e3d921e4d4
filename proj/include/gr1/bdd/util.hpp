#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gr1/bdd/manager.hpp"

namespace gr1::bdd {

/// Builds the function given by `table` over `vars` (vars[0] is the most
/// significant index bit) by Shannon expansion.  vars must be strictly
/// increasing.
inline Bdd from_truth_table(Manager& mgr, const std::vector<VarId>& vars,
                            const std::vector<bool>& table) {
  if (table.size() != (std::size_t{1} << vars.size()))
    throw std::invalid_argument("truth table size does not match variable count");
  for (std::size_t i = 1; i < vars.size(); ++i)
    if (vars[i] <= vars[i - 1]) throw std::invalid_argument("truth table vars must be increasing");
  std::vector<Bdd> level;
  level.reserve(table.size());
  for (bool b : table) level.push_back(mgr.constant(b));
  for (std::size_t k = vars.size(); k-- > 0;) {
    std::vector<Bdd> up;
    up.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2)
      up.push_back(level[i] == level[i + 1] ? level[i] : mgr.make_node(vars[k], level[i], level[i + 1]));
    level = std::move(up);
  }
  return level.front();
}

/// Interleaved layout: state bit k has unprimed id 2k and primed id 2k+1.
inline VarId unprimed(unsigned bit) { return 2 * bit; }
inline VarId primed(unsigned bit) { return 2 * bit + 1; }
inline bool is_primed(VarId v) { return (v & 1U) != 0; }

/// Renames x' to x.  Throws std::logic_error if f mentions an unprimed
/// variable.
inline Bdd to_unprimed(Manager& mgr, const Bdd& f) {
  for (VarId v : mgr.support(f))
    if (!is_primed(v)) throw std::logic_error("to_unprimed: operand mentions unprimed variables");
  std::vector<VarId> map(mgr.num_vars());
  for (VarId v = 0; v < map.size(); ++v) map[v] = is_primed(v) ? v - 1 : v;
  return mgr.permute(f, map, 1);
}

/// Renames x to x'.  Throws std::logic_error if f mentions a primed variable.
inline Bdd to_primed(Manager& mgr, const Bdd& f) {
  for (VarId v : mgr.support(f))
    if (is_primed(v)) throw std::logic_error("to_primed: operand mentions primed variables");
  std::vector<VarId> map(mgr.num_vars());
  for (VarId v = 0; v < map.size(); ++v) map[v] = is_primed(v) ? v : v + 1;
  if (mgr.num_vars() % 2) map.back() = map.size() - 1;
  return mgr.permute(f, map, 2);
}

}  // namespace gr1::bdd
