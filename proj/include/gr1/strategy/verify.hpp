#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1/strategy/strategy.hpp"

namespace gr1::strategy {

/// A failed check.  For fairness failures `prefix` leads from an initial
/// state to the first state of `loop`, which returns to it.
struct Violation {
  std::string kind;
  std::string message;
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> loop;

  [[nodiscard]] std::string to_string(const Strategy& s) const {
    std::string out = kind + ": " + message;
    auto dump = [&](const char* title, const std::vector<std::size_t>& ids) {
      if (ids.empty()) return;
      out += std::string("\n") + title + ":";
      for (std::size_t id : ids) out += "\n  #" + std::to_string(id) + " " + s.format(s.states[id].assignment);
    };
    dump("prefix", prefix);
    dump("loop", loop);
    return out;
  }
};

namespace detail {

// Tarjan's algorithm without recursion; returns the component of each node
// (-1 for nodes excluded by `keep`).
inline std::vector<int> scc(std::size_t n, const std::vector<std::vector<std::size_t>>& adj,
                            const std::vector<char>& keep, int& count) {
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> work;
  int counter = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (!keep[root] || index[root] >= 0) continue;
    work.emplace_back(root, 0);
    while (!work.empty()) {
      auto& [v, pos] = work.back();
      if (pos == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (pos < adj[v].size()) {
        std::size_t w = adj[v][pos++];
        if (!keep[w]) continue;
        if (index[w] < 0) {
          work.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      std::size_t done = v;
      if (low[done] == index[done]) {
        while (true) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
          if (w == done) break;
        }
        ++count;
      }
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }
  return comp;
}

// Shortest path from one of `from` to a node satisfying `goal`, both ends
// included, using only nodes allowed by `inside` after the start.  With
// `allow_empty` a start node satisfying `goal` is itself a path;
// otherwise the path has at least one edge.
inline std::vector<std::size_t> bfs_path(const std::vector<std::vector<std::size_t>>& adj,
                                         const std::vector<std::size_t>& from,
                                         const std::function<bool(std::size_t)>& inside,
                                         const std::function<bool(std::size_t)>& goal, bool allow_empty) {
  constexpr long kUnseen = -2, kRoot = -1;
  std::vector<long> parent(adj.size(), kUnseen);
  std::deque<std::size_t> q;
  for (std::size_t f : from) {
    if (allow_empty && goal(f)) return {f};
    if (parent[f] == kUnseen) {
      parent[f] = kRoot;
      q.push_back(f);
    }
  }
  auto path_to = [&](std::size_t last, std::size_t via) {
    std::vector<std::size_t> path{last};
    for (long p = static_cast<long>(via); p != kRoot; p = parent[static_cast<std::size_t>(p)])
      path.push_back(static_cast<std::size_t>(p));
    std::reverse(path.begin(), path.end());
    return path;
  };
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    for (std::size_t w : adj[v]) {
      if (!inside(w)) continue;
      if (goal(w)) return path_to(w, v);
      if (parent[w] != kUnseen) continue;
      parent[w] = static_cast<long>(v);
      q.push_back(w);
    }
  }
  return {};
}

inline std::vector<std::vector<std::size_t>> successors(const Strategy& s) {
  std::vector<std::vector<std::size_t>> adj(s.states.size());
  for (const auto& t : s.transitions) adj[t.from].push_back(t.to);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

inline std::vector<char> reachable(const Strategy& s, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(s.states.size(), 0);
  std::vector<std::size_t> work;
  for (std::size_t i : s.initial)
    if (!seen[i]) seen[i] = 1, work.push_back(i);
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) seen[w] = 1, work.push_back(w);
  }
  return seen;
}

// Lasso into the component `in_comp`, then around it through one node of
// each set in `targets`.
inline Violation lasso(const Strategy& s, const std::vector<std::vector<std::size_t>>& adj,
                       const std::vector<char>& in_comp, const std::vector<std::vector<char>>& targets,
                       std::string kind, std::string message) {
  Violation v{std::move(kind), std::move(message), {}, {}};
  auto inside = [&](std::size_t x) { return in_comp[x] != 0; };
  std::vector<std::size_t> prefix = bfs_path(adj, s.initial, [](std::size_t) { return true; }, inside, true);
  if (prefix.empty()) return v;
  std::size_t start = prefix.back();
  prefix.pop_back();
  v.prefix = prefix;
  std::vector<std::size_t> loop{start};
  auto extend = [&](const std::function<bool(std::size_t)>& goal) {
    auto seg = bfs_path(adj, {loop.back()}, inside, goal, false);
    loop.insert(loop.end(), seg.begin() + (seg.empty() ? 0 : 1), seg.end());
  };
  for (const auto& t : targets)
    if (!t[loop.back()]) extend([&](std::size_t x) { return t[x] != 0; });
  extend([&](std::size_t x) { return x == start; });
  loop.pop_back();
  v.loop = loop;
  return v;
}

inline bool nontrivial(const std::vector<std::vector<std::size_t>>& adj, const std::vector<int>& comp, int c,
                       std::size_t size, std::size_t some) {
  if (size > 1) return true;
  return std::find(adj[some].begin(), adj[some].end(), some) != adj[some].end() && comp[some] == c;
}

inline std::vector<std::vector<char>> state_sets(const Strategy& s, const Game& g, const std::vector<Bdd>& sets) {
  std::vector<std::vector<char>> out(sets.size(), std::vector<char>(s.states.size()));
  for (std::size_t v = 0; v < s.states.size(); ++v) {
    auto bits = bits_of(g, &s.states[v].assignment, nullptr);
    for (std::size_t k = 0; k < sets.size(); ++k) out[k][v] = g.mgr->eval(sets[k], bits);
  }
  return out;
}

inline void check_vars(const Strategy& s, const Game& g) {
  const auto& vars = g.enc.vars();
  bool ok = vars.size() == s.vars.size();
  for (std::size_t i = 0; ok && i < vars.size(); ++i) ok = vars[i].name == s.vars[i].name;
  if (!ok) throw std::invalid_argument("strategy variables do not match the game");
}

// Values of `vars` in a BDD-indexed bit vector.
inline std::vector<bool> project(const std::vector<bool>& bits, const std::vector<VarId>& vars) {
  std::vector<bool> out;
  for (VarId v : vars) out.push_back(bits[v]);
  return out;
}

}  // namespace detail

/// Model-checks a controller against its game: initial states cover every
/// initial env choice and satisfy both initial conditions; every state has
/// exactly one transition per env input allowed by rho_e, each satisfying
/// rho_s; and no reachable cycle visits every J_e while avoiding some J_s.
inline std::optional<Violation> verify_controller(const Strategy& c, const Game& g) {
  if (!c.is_controller()) throw std::invalid_argument("verify_controller: not a controller");
  detail::check_vars(c, g);
  Manager& M = *g.mgr;
  auto state_name = [&](std::size_t id) { return "#" + std::to_string(id) + " (" + c.format(c.states[id].assignment) + ")"; };

  std::set<std::vector<bool>> covered;
  for (std::size_t id : c.initial) {
    auto bits = detail::bits_of(g, &c.states[id].assignment, nullptr);
    if (!M.eval(g.theta_e & g.theta_s, bits))
      return Violation{"Initial", "initial state " + state_name(id) + " violates the initial conditions", {}, {}};
    covered.insert(detail::project(bits, g.env_cur_vars));
  }
  std::optional<Violation> out;
  M.enumerate(M.exists(g.theta_e, g.sys_cur_cube), g.env_cur_vars, [&](const std::vector<bool>& e) {
    if (covered.count(e)) return true;
    out = Violation{"Initial", "no initial state for an initial env choice", {}, {}};
    return false;
  });
  if (out) return out;

  auto outgoing = c.outgoing();
  for (std::size_t id = 0; id < c.states.size(); ++id) {
    const Assignment& a = c.states[id].assignment;
    Bdd legal = M.exists(M.restrict(g.rho_e, g.enc.cube_of(M, a, true, true, false)), g.sys_next_cube);
    std::set<std::vector<bool>> seen;
    for (std::size_t t : outgoing[id]) {
      const auto& tr = c.transitions[t];
      const Assignment& b = c.states[tr.to].assignment;
      auto bits = detail::bits_of(g, &a, &b);
      auto input = detail::project(bits, g.env_next_vars);
      if (detail::input_of(c, b) != tr.input)
        return Violation{"Input", "transition input differs from the target's env values at " + state_name(id), {}, {}};
      if (!M.eval(g.rho_e, bits))
        return Violation{"Input", "transition on an env input rho_e forbids from " + state_name(id), {}, {}};
      if (!M.eval(g.rho_s, bits))
        return Violation{"Safety", "transition " + state_name(id) + " -> " + state_name(tr.to) + " violates rho_s", {}, {}};
      if (!seen.insert(input).second)
        return Violation{"Nondeterministic", "two transitions for one env input at " + state_name(id), {}, {}};
    }
    std::size_t legal_count = 0;
    M.enumerate(legal, g.env_next_vars, [&](const std::vector<bool>&) {
      ++legal_count;
      return true;
    });
    if (legal_count != seen.size())
      return Violation{"Totality", "missing transition for a legal env input at " + state_name(id), {}, {}};
  }

  auto adj = detail::successors(c);
  auto reach = detail::reachable(c, adj);
  auto je = detail::state_sets(c, g, g.je);
  auto js = detail::state_sets(c, g, g.js);
  for (std::size_t j = 0; j < g.n(); ++j) {
    std::vector<char> keep(c.states.size());
    for (std::size_t v = 0; v < keep.size(); ++v) keep[v] = reach[v] && !js[j][v];
    int count = 0;
    auto comp = detail::scc(c.states.size(), adj, keep, count);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(count));
    for (std::size_t v = 0; v < comp.size(); ++v)
      if (comp[v] >= 0) members[static_cast<std::size_t>(comp[v])].push_back(v);
    for (int k = 0; k < count; ++k) {
      const auto& mem = members[static_cast<std::size_t>(k)];
      if (!detail::nontrivial(adj, comp, k, mem.size(), mem[0])) continue;
      bool fair = true;
      for (std::size_t i = 0; i < g.m() && fair; ++i)
        fair = std::any_of(mem.begin(), mem.end(), [&](std::size_t v) { return je[i][v] != 0; });
      if (!fair) continue;
      std::vector<char> in_comp(c.states.size());
      for (std::size_t v : mem) in_comp[v] = 1;
      return detail::lasso(c, adj, in_comp, je, "Fairness",
                           "a cycle satisfies every assumption justice but never '" + g.js_prov[j].label + "'");
    }
  }
  return std::nullopt;
}

/// Checks every transition annotation against the fixpoint ranks:
/// GoalSatisfied(j) leaves a J_s[j] state with memory j and moves to goal
/// j+1, ApproachGoal(j) strictly lowers the y[j] rank, PreventEnvJustice(i)
/// leaves a state outside J_e[i] and stays in the x set for i at the source
/// rank.  Rule priority is checked too: a lower rule is only used when no
/// higher one could answer the same env input.
inline std::vector<std::string> check_annotations(const Strategy& c, const Game& g, const synth::FixpointMemory& mem) {
  Manager& M = *g.mgr;
  std::vector<std::string> errors;
  std::map<std::pair<std::size_t, std::size_t>, Bdd> ring_next;
  auto primed_ring = [&](std::size_t j, std::size_t r) -> const Bdd& {
    auto it = ring_next.find({j, r});
    if (it == ring_next.end()) it = ring_next.emplace(std::make_pair(j, r), g.prime(mem.y[j][r])).first;
    return it->second;
  };
  for (std::size_t t = 0; t < c.transitions.size(); ++t) {
    const auto& tr = c.transitions[t];
    const auto& from = c.states[tr.from];
    const auto& to = c.states[tr.to];
    auto j = static_cast<std::size_t>(from.memory.at(0));
    auto fb = detail::bits_of(g, &from.assignment, nullptr);
    auto tb = detail::bits_of(g, &to.assignment, nullptr);
    std::size_t r = detail::rank_of(M, mem.y[j], fb);
    auto fail = [&](const std::string& why) {
      errors.push_back("transition " + std::to_string(t) + " (" + reason_name(tr.annotation.kind) + "): " + why);
    };
    if (j >= g.n() || r >= mem.y[j].size()) {
      fail("source outside the winning region");
      continue;
    }
    const bool at_goal = M.eval(g.js[j], fb);
    // sys answers to this env input, as a predicate over next sys bits
    auto answers = [&]() {
      auto both = detail::bits_of(g, &from.assignment, &to.assignment);
      Bdd env_next = detail::cube_of(g, g.env_next_vars, detail::project(both, g.env_next_vars));
      return g.enc.cube_of(M, from.assignment, true, true, false) & env_next;
    };
    auto can_reach = [&](const Bdd& primed_target) {
      return !M.restrict(g.rho_s & primed_target, answers()).is_false();
    };
    const int next_goal = tr.annotation.kind == ReasonKind::GoalSatisfied ? static_cast<int>((j + 1) % g.n())
                                                                            : static_cast<int>(j);
    if (to.memory.at(0) != next_goal) fail("wrong goal memory after the transition");
    switch (tr.annotation.kind) {
      case ReasonKind::GoalSatisfied:
        if (tr.annotation.index != j) fail("goal index differs from the memory");
        else if (!at_goal) fail("source is not in the goal");
        break;
      case ReasonKind::ApproachGoal:
        if (tr.annotation.index != j) fail("goal index differs from the memory");
        else if (at_goal) fail("goal rule has priority");
        else if (detail::rank_of(M, mem.y[j], tb) >= r) fail("rank did not decrease");
        break;
      case ReasonKind::PreventEnvJustice: {
        std::size_t i = tr.annotation.index;
        if (i >= g.m()) fail("index out of range");
        else if (at_goal) fail("goal rule has priority");
        else if (r > 0 && can_reach(primed_ring(j, r - 1))) fail("approach rule has priority");
        else if (M.eval(g.je[i], fb)) fail("source satisfies the env justice");
        else if (!M.eval(mem.x[j][r][i], fb) || !M.eval(mem.x[j][r][i], tb)) fail("left the x set");
        else
          for (std::size_t k = 0; k < i; ++k)
            if (M.eval(mem.x[j][r][k], fb) && !M.eval(g.je[k], fb) && can_reach(g.prime(mem.x[j][r][k]))) {
              fail("a smaller env justice index applies");
              break;
            }
        break;
      }
      default: fail("not a controller annotation");
    }
  }
  return errors;
}

/// Checks a counter-strategy against its game: its initial env choice is
/// legal and every sys completion is present; each state's env move obeys
/// rho_e and every sys reply allowed by rho_s is present.  Since all sys
/// replies are kept, the graph contains every play against every sys
/// strategy, so the winning condition is checked per cycle: every
/// reachable cycle keeps some J_s false throughout and cannot avoid any J_e
/// forever.
inline std::optional<Violation> verify_counterstrategy(const Strategy& cs, const Game& g) {
  if (cs.is_controller()) throw std::invalid_argument("verify_counterstrategy: not a counter-strategy");
  detail::check_vars(cs, g);
  Manager& M = *g.mgr;
  auto state_name = [&](std::size_t id) { return "#" + std::to_string(id) + " (" + cs.format(cs.states[id].assignment) + ")"; };

  std::set<std::vector<bool>> env_parts, sys_parts;
  for (std::size_t id : cs.initial) {
    auto bits = detail::bits_of(g, &cs.states[id].assignment, nullptr);
    if (!M.eval(g.theta_e & g.theta_s, bits))
      return Violation{"Initial", "initial state " + state_name(id) + " violates the initial conditions", {}, {}};
    env_parts.insert(detail::project(bits, g.env_cur_vars));
    sys_parts.insert(detail::project(bits, g.sys_cur_vars));
  }
  if (env_parts.size() > 1) return Violation{"Initial", "initial states disagree on the env choice", {}, {}};
  if (!env_parts.empty()) {
    Bdd e0 = detail::cube_of(g, g.env_cur_vars, *env_parts.begin());
    std::size_t count = 0;
    M.enumerate(M.exists(g.theta_s & g.theta_e & e0, g.env_cur_cube), g.sys_cur_vars, [&](const std::vector<bool>&) {
      ++count;
      return true;
    });
    if (count != sys_parts.size()) return Violation{"Initial", "some initial sys choice is missing", {}, {}};
  } else {
    // No initial state: only sound if some env choice leaves sys without one.
    Bdd stuck = g.theta_e & !M.exists(g.theta_s, g.sys_cur_cube);
    if (stuck.is_false()) return Violation{"Initial", "no initial states although sys can always start", {}, {}};
  }

  auto outgoing = cs.outgoing();
  for (std::size_t id = 0; id < cs.states.size(); ++id) {
    const auto& st = cs.states[id];
    if (!st.env_move) return Violation{"Move", "state " + state_name(id) + " has no env move", {}, {}};
    Assignment next = st.assignment;
    std::size_t k = 0;
    for (std::size_t v = 0; v < cs.vars.size(); ++v)
      if (cs.vars[v].env) next[v] = (*st.env_move)[k++];
    auto bits = detail::bits_of(g, &st.assignment, &next);
    Bdd env_next = detail::cube_of(g, g.env_next_vars, detail::project(bits, g.env_next_vars));
    Bdd cur = g.enc.cube_of(M, st.assignment, true, true, false);
    if ((M.restrict(g.rho_e, cur) & env_next).is_false())
      return Violation{"Move", "env move at " + state_name(id) + " violates rho_e", {}, {}};
    Bdd replies = M.restrict(g.rho_s, cur & env_next);
    std::set<std::vector<bool>> seen;
    for (std::size_t t : outgoing[id]) {
      const auto& b = cs.states[cs.transitions[t].to].assignment;
      auto tb = detail::bits_of(g, &st.assignment, &b);
      if (detail::project(tb, g.env_next_vars) != detail::project(bits, g.env_next_vars))
        return Violation{"Move", "successor of " + state_name(id) + " ignores the env move", {}, {}};
      if (!M.eval(g.rho_s, tb)) return Violation{"Move", "successor of " + state_name(id) + " violates rho_s", {}, {}};
      seen.insert(detail::project(tb, g.sys_next_vars));
    }
    std::size_t count = 0;
    M.enumerate(replies, g.sys_next_vars, [&](const std::vector<bool>&) {
      ++count;
      return true;
    });
    if (count != seen.size()) return Violation{"Move", "a sys reply is missing at " + state_name(id), {}, {}};
  }

  auto adj = detail::successors(cs);
  auto reach = detail::reachable(cs, adj);
  auto je = detail::state_sets(cs, g, g.je);
  auto js = detail::state_sets(cs, g, g.js);
  int count = 0;
  auto comp = detail::scc(cs.states.size(), adj, reach, count);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (comp[v] >= 0) members[static_cast<std::size_t>(comp[v])].push_back(v);
  for (int c = 0; c < count; ++c) {
    const auto& mem = members[static_cast<std::size_t>(c)];
    if (!detail::nontrivial(adj, comp, c, mem.size(), mem[0])) continue;
    std::vector<char> in_comp(cs.states.size());
    for (std::size_t v : mem) in_comp[v] = 1;
    bool starved = false;
    for (std::size_t j = 0; j < g.n() && !starved; ++j)
      starved = std::none_of(mem.begin(), mem.end(), [&](std::size_t v) { return js[j][v] != 0; });
    if (!starved)
      return detail::lasso(cs, adj, in_comp, js, "Fairness", "a cycle lets sys satisfy every guarantee justice");
    for (std::size_t i = 0; i < g.m(); ++i) {
      std::vector<char> avoid(cs.states.size());
      for (std::size_t v : mem) avoid[v] = !je[i][v];
      int sub = 0;
      auto sc = detail::scc(cs.states.size(), adj, avoid, sub);
      std::vector<std::size_t> size(static_cast<std::size_t>(sub));
      for (std::size_t v : mem)
        if (sc[v] >= 0) ++size[static_cast<std::size_t>(sc[v])];
      for (std::size_t v : mem) {
        if (!avoid[v] || !detail::nontrivial(adj, sc, sc[v], size[static_cast<std::size_t>(sc[v])], v)) continue;
        std::vector<char> cyc(cs.states.size());
        for (std::size_t w = 0; w < sc.size(); ++w) cyc[w] = sc[w] == sc[v];
        return detail::lasso(cs, adj, cyc, {}, "Fairness",
                             "sys can avoid the assumption justice '" + g.je_prov[i].label + "' forever");
      }
    }
  }
  return std::nullopt;
}

}  // namespace gr1::strategy
