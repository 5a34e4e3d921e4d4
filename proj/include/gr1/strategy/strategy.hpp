#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gr1/synth/solver.hpp"

namespace gr1::strategy {

using synth::Assignment;
using synth::Bdd;
using synth::Game;
using synth::Manager;
using synth::VarId;

enum class ReasonKind {
  // controller transitions
  GoalSatisfied,
  ApproachGoal,
  PreventEnvJustice,
  // counter-strategy moves
  Descend,
  SatisfyEnvJustice,
  ApproachEnvJustice,
  // counter-strategy states
  StarveGoal,
  ForceDeadlock,
};

inline const char* reason_name(ReasonKind k) {
  switch (k) {
    case ReasonKind::GoalSatisfied: return "GoalSatisfied";
    case ReasonKind::ApproachGoal: return "ApproachGoal";
    case ReasonKind::PreventEnvJustice: return "PreventEnvJustice";
    case ReasonKind::Descend: return "Descend";
    case ReasonKind::SatisfyEnvJustice: return "SatisfyEnvJustice";
    case ReasonKind::ApproachEnvJustice: return "ApproachEnvJustice";
    case ReasonKind::StarveGoal: return "StarveGoal";
    case ReasonKind::ForceDeadlock: return "ForceDeadlock";
  }
  return "?";
}

inline std::optional<ReasonKind> parse_reason(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(ReasonKind::ForceDeadlock); ++k)
    if (s == reason_name(static_cast<ReasonKind>(k))) return static_cast<ReasonKind>(k);
  return std::nullopt;
}

/// Why a transition was taken.  `index` is the sys justice for goal kinds
/// and the env justice for env-justice kinds; `label` its source label.
struct Annotation {
  ReasonKind kind = ReasonKind::GoalSatisfied;
  std::size_t index = 0;
  std::string label;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct VarInfo {
  std::string name;
  bool env = true;
  bool aux = false;
  std::vector<std::string> values;  // empty for boolean
};

struct StrategyState {
  Assignment assignment;
  std::vector<int> memory;
  // Counter-strategies only: the state's purpose and the env move chosen
  // there (values of the env variables, in variable order).
  std::optional<Annotation> annotation;
  std::optional<Assignment> env_move;
};

/// `input` holds the values chosen by the reacting player: env variables
/// for a controller, sys variables for a counter-strategy.
struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  Assignment input;
  Annotation annotation;
};

/// Enumerated controller or counter-strategy.
struct Strategy {
  enum class Kind { Controller, CounterStrategy };
  Kind kind = Kind::Controller;
  std::string spec_name;
  std::vector<VarInfo> vars;
  std::vector<std::string> memory_names;
  std::vector<StrategyState> states;
  std::vector<std::size_t> initial;
  std::vector<Transition> transitions;

  [[nodiscard]] bool is_controller() const { return kind == Kind::Controller; }

  /// Variable indices covered by Transition::input.
  [[nodiscard]] std::vector<std::size_t> input_vars() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].env == is_controller()) out.push_back(i);
    return out;
  }

  /// Outgoing transition indices per state.
  [[nodiscard]] std::vector<std::vector<std::size_t>> outgoing() const {
    std::vector<std::vector<std::size_t>> out(states.size());
    for (std::size_t t = 0; t < transitions.size(); ++t) out[transitions[t].from].push_back(t);
    return out;
  }

  [[nodiscard]] std::string value_name(std::size_t var, int v) const {
    const auto& d = vars[var].values;
    if (d.empty()) return v ? "true" : "false";
    return v >= 0 && static_cast<std::size_t>(v) < d.size() ? d[static_cast<std::size_t>(v)] : "#" + std::to_string(v);
  }

  [[nodiscard]] std::string format(const Assignment& a) const {
    std::string out;
    for (std::size_t i = 0; i < a.size() && i < vars.size(); ++i) {
      if (i) out += ' ';
      out += vars[i].name + '=' + value_name(i, a[i]);
    }
    return out;
  }
};

inline std::vector<VarInfo> var_infos(const Game& g) {
  std::vector<VarInfo> out;
  for (const auto& v : g.enc.vars()) out.push_back({v.name, v.env, v.aux, v.domain.values});
  return out;
}

namespace detail {

// BDD-variable-indexed bit vector holding `cur` as current and `next` as
// next state (either may be null).
inline std::vector<bool> bits_of(const Game& g, const Assignment* cur, const Assignment* next) {
  std::vector<bool> bits(g.enc.num_bdd_vars());
  if (cur) g.enc.store(*cur, bits, false);
  if (next) g.enc.store(*next, bits, true);
  return bits;
}

inline Bdd cube_of(const Game& g, const std::vector<VarId>& vars, const std::vector<bool>& vals) {
  std::vector<std::pair<VarId, bool>> lits;
  for (std::size_t k = 0; k < vars.size(); ++k) lits.emplace_back(vars[k], vals[k]);
  return g.mgr->minterm(lits);
}

// Smallest r with `bits` in rings[r]; rings.size() if none.
inline std::size_t rank_of(const Manager& M, const std::vector<Bdd>& rings, const std::vector<bool>& bits) {
  for (std::size_t r = 0; r < rings.size(); ++r)
    if (M.eval(rings[r], bits)) return r;
  return rings.size();
}

inline std::string strategy_name(const Game& g) { return g.spec ? g.spec->source.name : std::string("game"); }

}  // namespace detail

}  // namespace gr1::strategy
