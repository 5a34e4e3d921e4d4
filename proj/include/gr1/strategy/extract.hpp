#pragma once

#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "gr1/strategy/strategy.hpp"

namespace gr1::strategy {

namespace detail {

// Interns (assignment, memory) pairs as strategy states, queueing new ones.
class StateTable {
 public:
  explicit StateTable(Strategy& s) : s_(s) {}

  std::size_t intern(const Assignment& a, const std::vector<int>& mem) {
    auto key = std::make_pair(a, mem);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::size_t id = s_.states.size();
    s_.states.push_back({a, mem, std::nullopt, std::nullopt});
    ids_.emplace(std::move(key), id);
    queue_.push_back(id);
    return id;
  }
  bool next(std::size_t& id) {
    if (queue_.empty()) return false;
    id = queue_.front();
    queue_.pop_front();
    return true;
  }

 private:
  Strategy& s_;
  std::map<std::pair<Assignment, std::vector<int>>, std::size_t> ids_;
  std::deque<std::size_t> queue_;
};

inline std::vector<bool> full_bits(const std::vector<VarId>& vars, const std::vector<bool>& vals,
                                   std::vector<bool> into) {
  for (std::size_t k = 0; k < vars.size(); ++k) into[vars[k]] = vals[k];
  return into;
}

inline Assignment input_of(const Strategy& s, const Assignment& next) {
  Assignment in;
  for (std::size_t v : s.input_vars()) in.push_back(next[v]);
  return in;
}

}  // namespace detail

/// Enumerates the reachable part of the memory-based winning strategy.
/// Controller memory is the index j of the sys justice currently pursued.
/// Per state and env input the first applicable rule wins: GoalSatisfied
/// (state in J_s[j]: any successor in z, switch to j+1), ApproachGoal
/// (successor in a lower ring of y[j]), PreventEnvJustice (stay in the
/// x set of the smallest env justice i the state avoids).  Among the
/// successors allowed by the rule the lexicographically smallest in bit
/// order is taken.
inline Strategy extract_controller(const Game& g, const synth::FixpointMemory& mem) {
  Manager& M = *g.mgr;
  Strategy s;
  s.kind = Strategy::Kind::Controller;
  s.spec_name = detail::strategy_name(g);
  s.vars = var_infos(g);
  s.memory_names = {"goal"};
  const std::size_t n = g.n(), m = g.m();

  Bdd z_next = g.prime(mem.z);
  std::vector<std::vector<Bdd>> y_next(n);
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Bdd> x_next;
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& ring : mem.y[j]) y_next[j].push_back(g.prime(ring));
  auto x_primed = [&](std::size_t j, std::size_t r, std::size_t i) -> const Bdd& {
    auto key = std::make_tuple(j, r, i);
    auto it = x_next.find(key);
    if (it == x_next.end()) it = x_next.emplace(key, g.prime(mem.x[j][r][i])).first;
    return it->second;
  };

  detail::StateTable table(s);
  Bdd env_init = M.exists(g.theta_e, g.sys_cur_cube);
  M.enumerate(env_init, g.env_cur_vars, [&](const std::vector<bool>& e) {
    Bdd pick = g.theta_e & g.theta_s & mem.z & detail::cube_of(g, g.env_cur_vars, e);
    auto bits = M.pick_one(pick, g.all_vars());
    if (!bits) throw std::logic_error("extract_controller: initial env choice has no winning answer");
    s.initial.push_back(table.intern(g.enc.decode(*bits), {0}));
    return true;
  });

  std::size_t id = 0;
  while (table.next(id)) {
    const Assignment a = s.states[id].assignment;
    const auto j = static_cast<std::size_t>(s.states[id].memory[0]);
    std::vector<bool> cur = detail::bits_of(g, &a, nullptr);
    Bdd c = g.enc.cube_of(M, a, true, true, false);
    Bdd env_moves = M.exists(M.restrict(g.rho_e, c), g.sys_next_cube);
    Bdd sys_rel = M.restrict(g.rho_s, c);
    const bool at_goal = M.eval(g.js[j], cur);
    const std::size_t r = detail::rank_of(M, mem.y[j], cur);
    if (r == mem.y[j].size()) throw std::logic_error("extract_controller: state outside the winning region: " + g.format(a));
    M.enumerate(env_moves, g.env_next_vars, [&](const std::vector<bool>& e) {
      Bdd env_cube = detail::cube_of(g, g.env_next_vars, e);
      Bdd answers = M.restrict(sys_rel, env_cube);
      auto within = [&](const Bdd& target) { return answers & M.restrict(target, env_cube); };
      Bdd cand = M.bdd_false();
      Annotation ann;
      int next_goal = static_cast<int>(j);
      if (at_goal) {
        cand = within(z_next);
        ann = {ReasonKind::GoalSatisfied, j, g.js_prov[j].label};
        next_goal = static_cast<int>((j + 1) % n);
      }
      if (cand.is_false() && r > 0) {
        cand = within(y_next[j][r - 1]);
        ann = {ReasonKind::ApproachGoal, j, g.js_prov[j].label};
      }
      for (std::size_t i = 0; i < m && cand.is_false(); ++i) {
        if (!M.eval(mem.x[j][r][i], cur) || M.eval(g.je[i], cur)) continue;
        cand = within(x_primed(j, r, i));
        ann = {ReasonKind::PreventEnvJustice, i, g.je_prov[i].label};
      }
      if (cand.is_false()) throw std::logic_error("extract_controller: no rule applies in " + g.format(a));
      auto sys = M.pick_one(cand, g.sys_next_vars);
      std::vector<bool> full = detail::full_bits(g.env_next_vars, e, cur);
      full = detail::full_bits(g.sys_next_vars, *sys, full);
      Assignment next = g.enc.decode(full, true);
      std::size_t to = table.intern(next, {next_goal});
      s.transitions.push_back({id, to, detail::input_of(s, next), ann});
      return true;
    });
  }
  return s;
}

/// Enumerates the reachable part of the env strategy read off the dual
/// memory.  Memory is (level k, starved sys justice j, env justice i).  The
/// env descends to a lower level when it can force that, otherwise it
/// satisfies J_e[i] and moves on to i+1 while staying in y[k][j], otherwise
/// it approaches J_e[i] through the rings of x[k][j][i].  Every sys reply
/// allowed by rho_s is kept.
inline Strategy extract_counterstrategy(const Game& g, const synth::DualMemory& dual) {
  Manager& M = *g.mgr;
  Strategy s;
  s.kind = Strategy::Kind::CounterStrategy;
  s.spec_name = detail::strategy_name(g);
  s.vars = var_infos(g);
  s.memory_names = {"level", "goal", "env_justice"};
  const std::size_t K = dual.level.size() - 1, m = g.m();

  std::vector<Bdd> descend(K + 1);
  for (std::size_t k = 1; k <= K; ++k) descend[k] = synth::cpre_env(g, dual.level[k - 1]);

  auto entry = [&](const std::vector<bool>& bits) -> std::vector<int> {
    std::size_t k = detail::rank_of(M, dual.level, bits);
    if (k == 0 || k > K) throw std::logic_error("extract_counterstrategy: state outside the losing region");
    std::size_t j = detail::rank_of(M, dual.y[k], bits);
    return {static_cast<int>(k), static_cast<int>(j), 0};
  };

  detail::StateTable table(s);
  Bdd lose = dual.losing();
  Bdd bad_env = g.theta_e & M.forall(g.theta_s.implies(lose), g.sys_cur_cube);
  auto e0 = M.pick_one(M.exists(bad_env, g.sys_cur_cube), g.env_cur_vars);
  if (!e0) throw std::logic_error("extract_counterstrategy: the game is realizable");
  Bdd init = g.theta_e & g.theta_s & detail::cube_of(g, g.env_cur_vars, *e0);
  M.enumerate(M.exists(init, g.env_cur_cube), g.sys_cur_vars, [&](const std::vector<bool>& sv) {
    std::vector<bool> bits(g.enc.num_bdd_vars());
    bits = detail::full_bits(g.env_cur_vars, *e0, bits);
    bits = detail::full_bits(g.sys_cur_vars, sv, bits);
    s.initial.push_back(table.intern(g.enc.decode(bits), entry(bits)));
    return true;
  });

  std::size_t id = 0;
  while (table.next(id)) {
    const Assignment a = s.states[id].assignment;
    const std::vector<int> memv = s.states[id].memory;
    const auto k = static_cast<std::size_t>(memv[0]), j = static_cast<std::size_t>(memv[1]),
               i = static_cast<std::size_t>(memv[2]);
    std::vector<bool> cur = detail::bits_of(g, &a, nullptr);
    Bdd c = g.enc.cube_of(M, a, true, true, false);
    Bdd target;
    Annotation move;
    std::vector<int> next_mem = memv;
    bool reenter = false;
    if (M.eval(descend[k], cur)) {
      target = dual.level[k - 1];
      move = {ReasonKind::Descend, j, g.js_prov[j].label};
      reenter = true;
    } else if (M.eval(g.je[i], cur)) {
      target = dual.y[k][j];
      move = {ReasonKind::SatisfyEnvJustice, i, g.je_prov[i].label};
      next_mem[2] = static_cast<int>((i + 1) % m);
    } else {
      const auto& rings = dual.x[k][j][i];
      std::size_t t = detail::rank_of(M, rings, cur);
      if (t == 0 || t == rings.size())
        throw std::logic_error("extract_counterstrategy: state outside its env-justice rings in " + g.format(a));
      target = rings[t - 1];
      move = {ReasonKind::ApproachEnvJustice, i, g.je_prov[i].label};
    }
    Bdd sys_rel = M.restrict(g.rho_s, c);
    Bdd escapes = M.and_exists(sys_rel, !g.prime(target), g.sys_next_cube);
    Bdd env_ok = M.exists(M.restrict(g.rho_e, c), g.sys_next_cube) & !escapes;
    auto e = M.pick_one(env_ok, g.env_next_vars);
    if (!e) throw std::logic_error("extract_counterstrategy: no env move in " + g.format(a));
    Bdd answers = M.restrict(sys_rel, detail::cube_of(g, g.env_next_vars, *e));
    bool deadlock = answers.is_false();
    s.states[id].annotation = deadlock ? Annotation{ReasonKind::ForceDeadlock, j, g.js_prov[j].label}
                                       : Annotation{ReasonKind::StarveGoal, j, g.js_prov[j].label};
    std::vector<bool> base = detail::full_bits(g.env_next_vars, *e, cur);
    Assignment moved = g.enc.decode(base, true), env_move;
    for (std::size_t v = 0; v < s.vars.size(); ++v)
      if (s.vars[v].env) env_move.push_back(moved[v]);
    s.states[id].env_move = env_move;
    if (deadlock) continue;
    M.enumerate(answers, g.sys_next_vars, [&](const std::vector<bool>& sv) {
      std::vector<bool> full = detail::full_bits(g.sys_next_vars, sv, base);
      Assignment next = g.enc.decode(full, true);
      std::vector<int> mem_to = next_mem;
      if (reenter) {
        std::vector<bool> nb = detail::bits_of(g, &next, nullptr);
        mem_to = entry(nb);
      }
      std::size_t to = table.intern(next, mem_to);
      s.transitions.push_back({id, to, detail::input_of(s, next), move});
      return true;
    });
  }
  return s;
}

}  // namespace gr1::strategy
