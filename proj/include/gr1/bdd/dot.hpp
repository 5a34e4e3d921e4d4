#pragma once

#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "gr1/bdd/manager.hpp"

namespace gr1::bdd {

/// Writes a diagram in Graphviz format.  `names` maps variable ids to labels;
/// missing entries print as "v<id>".
inline void write_dot(std::ostream& os, const Manager& mgr, const Bdd& f,
                      const std::vector<std::string>& names = {}) {
  os << "digraph bdd {\n  node [shape=circle];\n";
  os << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{f.id()};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n <= kTrueNode || !seen.insert(n).second) continue;
    VarId v = mgr.node_var(n);
    std::string label = v < names.size() ? names[v] : "v" + std::to_string(v);
    os << "  n" << n << " [label=\"" << label << "\"];\n";
    os << "  n" << n << " -> n" << mgr.node_lo(n) << " [style=dashed];\n";
    os << "  n" << n << " -> n" << mgr.node_hi(n) << ";\n";
    stack.push_back(mgr.node_lo(n));
    stack.push_back(mgr.node_hi(n));
  }
  os << "}\n";
}

}  // namespace gr1::bdd
