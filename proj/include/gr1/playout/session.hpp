#pragma once

#include <algorithm>
#include <json.hpp>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gr1/spec/parser.hpp"
#include "gr1/strategy/export.hpp"
#include "gr1/strategy/extract.hpp"

namespace gr1::playout {

using strategy::Annotation;
using strategy::Strategy;
using synth::Assignment;
using synth::Bdd;
using synth::Game;
using synth::Manager;
using synth::VarId;

inline constexpr const char* kPlayoutSchema = "gr1-playout/1";

/// A solved specification with the strategy read off its verdict.  The
/// mutex guards the BDD manager, which sessions on the same artifact share.
struct Artifact {
  std::string name;
  std::shared_ptr<Game> game;
  bool realizable = false;
  std::optional<Strategy> controller;
  std::optional<Strategy> counter;
  mutable std::mutex mutex;
};

/// Parses, solves and extracts the strategy for one specification.
inline std::shared_ptr<Artifact> make_artifact(const std::string& name, const spec::SpecDocument& doc) {
  auto a = std::make_shared<Artifact>();
  a->name = name;
  a->game = std::make_shared<Game>(synth::prepare_game(doc));
  auto r = synth::check_realizability(*a->game);
  a->realizable = r.realizable;
  if (r.realizable) a->controller = strategy::extract_controller(*a->game, r.mem);
  else a->counter = strategy::extract_counterstrategy(*a->game, *r.dual);
  return a;
}

/// Artifact over a game without a strategy (free play only).
inline std::shared_ptr<Artifact> make_game_artifact(const std::string& name, Game g) {
  auto a = std::make_shared<Artifact>();
  a->name = name;
  a->game = std::make_shared<Game>(std::move(g));
  return a;
}

enum class Mode { HumanEnv, HumanSys, FreePlay };
enum class Policy { Reject, Accept };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::HumanEnv: return "human-env";
    case Mode::HumanSys: return "human-sys";
    case Mode::FreePlay: return "free";
  }
  return "?";
}
inline std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::HumanEnv, Mode::HumanSys, Mode::FreePlay})
    if (s == mode_name(m)) return m;
  if (s == "HumanEnv_vs_Controller") return Mode::HumanEnv;
  if (s == "HumanSys_vs_CounterStrategy") return Mode::HumanSys;
  if (s == "FreePlay") return Mode::FreePlay;
  return std::nullopt;
}
inline const char* policy_name(Policy p) { return p == Policy::Reject ? "reject" : "accept"; }
inline std::optional<Policy> parse_policy(const std::string& s) {
  if (s == "reject") return Policy::Reject;
  if (s == "accept") return Policy::Accept;
  return std::nullopt;
}
inline Policy default_policy(Mode m) { return m == Mode::FreePlay ? Policy::Accept : Policy::Reject; }

class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A violated source constraint, identified by its original label.
struct ViolationRef {
  std::string side;
  std::string label;
  std::string kind;
  friend auto operator<=>(const ViolationRef&, const ViolationRef&) = default;
};

struct ScoreEntry {
  std::string side;
  std::string label;
  std::size_t since = 0;  // states since it last held (0: holds now)
};

struct LegalMoves {
  std::vector<Assignment> moves;  // over Session::human_vars()
  double total = 0;
};

enum class Status { AwaitingInitial, Running, EnvDeadlock, SysDeadlock, OffStrategy };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::AwaitingInitial: return "awaiting_initial";
    case Status::Running: return "running";
    case Status::EnvDeadlock: return "env_deadlock";
    case Status::SysDeadlock: return "sys_deadlock";
    case Status::OffStrategy: return "off_strategy";
  }
  return "?";
}

struct TraceStep {
  Assignment move;                           // the human's values
  Assignment state;                          // full state reached
  std::optional<Annotation> annotation;      // strategy move, if any
  std::optional<Annotation> purpose;         // counter-strategy state annotation
  std::vector<ViolationRef> violations;      // raised by this step
  std::optional<std::size_t> strategy_state;
  Status status = Status::Running;
};

/// One interactive play.  The human supplies values for the declared
/// (non-aux) variables of their side; aux values follow from their
/// definitions.  Not thread-safe: callers serialize access per session and
/// hold the artifact mutex.
class Session {
 public:
  Session(std::shared_ptr<const Artifact> art, Mode mode, std::optional<Policy> policy = std::nullopt)
      : art_(std::move(art)), mode_(mode), policy_(policy.value_or(default_policy(mode))) {
    if (mode_ == Mode::HumanEnv && !art_->controller)
      throw ModeMismatch("human-env play needs a controller; '" + art_->name + "' has none");
    if (mode_ == Mode::HumanSys && !art_->counter)
      throw ModeMismatch("human-sys play needs a counter-strategy; '" + art_->name + "' has none");
    const Game& g = game();
    const auto& vars = g.enc.vars();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      bool mine = mode_ == Mode::FreePlay || vars[i].env == (mode_ == Mode::HumanEnv);
      if (mine && !vars[i].aux) human_.push_back(i);
    }
    Manager& M = *g.mgr;
    def_init_[0] = def_init_[1] = def_step_[0] = def_step_[1] = M.bdd_true();
    for (const auto& p : g.parts) {
      if (p.prov.role != pattern::Role::Definition || !p.prov.origin) continue;
      int side = p.prov.side == spec::Side::Assumption ? 0 : 1;
      if (p.prov.kind == spec::ConstraintKind::Initial) def_init_[side] &= p.bdd;
      if (p.prov.kind == spec::ConstraintKind::Safety) def_step_[side] &= p.bdd;
    }
    // A move is legal when it satisfies its side's transition constraints
    // and keeps that side's state invariants on the state it reaches.
    trans_[0] = g.parts.empty() ? g.rho_e : M.bdd_true();
    trans_[1] = g.parts.empty() ? g.rho_s : M.bdd_true();
    for (const auto& p : g.parts) {
      bool cur_only = true;
      for (VarId v : M.support(p.bdd)) cur_only = cur_only && !bdd::is_primed(v);
      invariant_.push_back(cur_only);
      if (p.prov.kind != spec::ConstraintKind::Safety) continue;
      trans_[p.prov.side == spec::Side::Assumption ? 0 : 1] &= cur_only ? g.prime(p.bdd) : p.bdd;
    }
    for (std::size_t i = 0; i < g.m(); ++i) score_.push_back({"assumption", g.je_prov[i].label, 0});
    for (std::size_t j = 0; j < g.n(); ++j) score_.push_back({"guarantee", g.js_prov[j].label, 0});
    if (g.spec)
      for (std::size_t o = 0; o < g.spec->monitor_violation.size(); ++o)
        if (g.spec->monitor_violation[o]) monitors_.emplace_back(o, g.enc.encode(M, g.spec->monitor_violation[o]));
    refresh_status();
  }

  [[nodiscard]] const Artifact& artifact() const { return *art_; }
  [[nodiscard]] const Game& game() const { return *art_->game; }
  [[nodiscard]] Mode mode() const { return mode_; }
  [[nodiscard]] Policy policy() const { return policy_; }
  [[nodiscard]] Status status() const { return status_; }
  [[nodiscard]] const std::vector<std::size_t>& human_vars() const { return human_; }
  [[nodiscard]] const std::optional<Assignment>& state() const { return state_; }
  [[nodiscard]] const std::vector<TraceStep>& trace() const { return trace_; }
  [[nodiscard]] const std::vector<ScoreEntry>& scoreboard() const { return score_; }
  [[nodiscard]] const std::set<ViolationRef>& violations() const { return violated_; }
  [[nodiscard]] std::optional<std::size_t> strategy_state() const { return node_; }
  [[nodiscard]] const Strategy* strategy() const {
    if (mode_ == Mode::HumanEnv) return &*art_->controller;
    if (mode_ == Mode::HumanSys) return &*art_->counter;
    return nullptr;
  }

  /// Env move the counter-strategy will play next (human-sys mode).
  [[nodiscard]] std::optional<Assignment> pending_env_move() const {
    if (mode_ != Mode::HumanSys) return std::nullopt;
    if (!state_) {
      const auto& cs = *art_->counter;
      if (cs.initial.empty()) return std::nullopt;
      return env_part(cs.states[cs.initial[0]].assignment);
    }
    if (!node_) return std::nullopt;
    return art_->counter->states[*node_].env_move;
  }

  /// Human-side moves allowed by that side's constraints, the first `cap`
  /// of them in lexicographic order, with the exact total.
  [[nodiscard]] LegalMoves legal_moves(std::size_t cap = 64) const {
    LegalMoves out;
    if (status_ != Status::Running && status_ != Status::AwaitingInitial) return out;
    const Game& g = game();
    Manager& M = *g.mgr;
    const bool initial = !state_;
    std::vector<VarId> hv = human_bits(initial);
    Bdd f = allowed(initial);
    f = M.exists(f, M.cube(others(hv, initial)));
    out.total = M.sat_count(f, hv);
    M.enumerate(f, hv, [&](const std::vector<bool>& bits) {
      if (out.moves.size() >= cap) return false;
      out.moves.push_back(decode_human(bits));
      return true;
    });
    return out;
  }

  /// Parses a move given as {var: value}; exactly the human variables.
  [[nodiscard]] Assignment parse_move(const nlohmann::json& j) const {
    if (!j.is_object()) throw IllegalMove("move must be an object of variable values");
    const Game& g = game();
    Assignment move;
    for (std::size_t v : human_) {
      const std::string& name = g.enc.vars()[v].name;
      if (!j.contains(name)) throw IllegalMove("missing value for " + name);
      const auto& x = j.at(name);
      std::string text = x.is_boolean() ? (x.get<bool>() ? "true" : "false") : x.is_string() ? x.get<std::string>() : x.dump();
      int val = g.enc.parse_value(v, text);
      if (val < 0) throw IllegalMove("'" + text + "' is not a value of " + name);
      move.push_back(val);
    }
    for (const auto& [name, _] : j.items()) {
      const auto* sv = g.enc.find(name);
      std::size_t idx = sv ? g.enc.index_of(name) : 0;
      if (!sv || std::find(human_.begin(), human_.end(), idx) == human_.end())
        throw IllegalMove("'" + name + "' is not a variable of the human side");
    }
    return move;
  }

  nlohmann::json move_json(const Assignment& move) const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t k = 0; k < human_.size(); ++k) j[game().enc.vars()[human_[k]].name] = value_json(human_[k], move[k]);
    return j;
  }

  /// Values of the env variables, in variable order.
  nlohmann::json env_json(const Assignment& env) const {
    nlohmann::json j = nlohmann::json::object();
    std::size_t k = 0;
    for (std::size_t v = 0; v < game().enc.vars().size(); ++v)
      if (game().enc.vars()[v].env) j[game().enc.vars()[v].name] = value_json(v, env[k++]);
    return j;
  }

  nlohmann::json assignment_json(const Assignment& a) const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t v = 0; v < a.size(); ++v) j[game().enc.vars()[v].name] = value_json(v, a[v]);
    return j;
  }

  /// Plays one human move and the strategy's answer.
  const TraceStep& step(const Assignment& move) {
    if (status_ != Status::Running && status_ != Status::AwaitingInitial)
      throw IllegalMove(std::string("session is over (") + status_name(status_) + ")");
    if (move.size() != human_.size()) throw IllegalMove("move must assign exactly the human side's variables");
    const Game& g = game();
    for (std::size_t k = 0; k < move.size(); ++k) {
      const auto& d = g.enc.vars()[human_[k]].domain;
      int limit = d.is_bool() ? 2 : static_cast<int>(d.values.size());
      if (move[k] < 0 || move[k] >= limit) throw IllegalMove("value out of range for " + g.enc.vars()[human_[k]].name);
    }
    return state_ ? advance(move) : start(move);
  }

 private:
  [[nodiscard]] nlohmann::json value_json(std::size_t v, int val) const {
    if (game().enc.vars()[v].domain.is_bool()) return val != 0;
    return game().enc.value_name(v, val);
  }

  [[nodiscard]] Assignment env_part(const Assignment& a) const {
    Assignment out;
    for (std::size_t v = 0; v < a.size(); ++v)
      if (game().enc.vars()[v].env) out.push_back(a[v]);
    return out;
  }

  [[nodiscard]] std::vector<VarId> human_bits(bool initial) const {
    std::vector<VarId> out;
    for (std::size_t v : human_)
      for (VarId b : game().enc.var_bits(game().enc.vars()[v], !initial)) out.push_back(b);
    return out;
  }

  // Bits of the relevant copy (current when initial, next otherwise) not
  // in `keep`.
  [[nodiscard]] std::vector<VarId> others(const std::vector<VarId>& keep, bool initial) const {
    std::vector<VarId> out;
    for (VarId b : initial ? game().cur_vars : game().next_vars)
      if (std::find(keep.begin(), keep.end(), b) == keep.end()) out.push_back(b);
    return out;
  }

  [[nodiscard]] Assignment decode_human(const std::vector<bool>& bits) const {
    Assignment out;
    std::size_t k = 0;
    for (std::size_t v : human_) {
      int val = 0;
      for (unsigned b = 0; b < game().enc.vars()[v].nbits; ++b) val = (val << 1) | (bits[k++] ? 1 : 0);
      out.push_back(val);
    }
    return out;
  }

  [[nodiscard]] Bdd current_cube() const { return game().enc.cube_of(*game().mgr, *state_, true, true, false); }

  [[nodiscard]] Bdd env_move_cube(bool initial) const {
    const Game& g = game();
    auto move = pending_env_move();
    Assignment full(g.enc.vars().size(), 0);
    std::size_t k = 0;
    for (std::size_t v = 0; v < full.size(); ++v)
      if (g.enc.vars()[v].env) full[v] = (*move)[k++];
    return g.enc.cube_of(*g.mgr, full, true, false, !initial);
  }

  // What the human side may do now, over current (initial) or next bits.
  [[nodiscard]] Bdd allowed(bool initial) const {
    const Game& g = game();
    Manager& M = *g.mgr;
    switch (mode_) {
      case Mode::HumanEnv: return initial ? g.theta_e : M.restrict(trans_[0], current_cube());
      case Mode::HumanSys: {
        if (!pending_env_move()) return M.bdd_false();
        Bdd env = env_move_cube(initial);
        return initial ? g.theta_s & g.theta_e & env : M.restrict(trans_[1] & env, current_cube());
      }
      case Mode::FreePlay:
        return initial ? g.theta_e & g.theta_s : M.restrict(trans_[0] & trans_[1], current_cube());
    }
    return M.bdd_false();
  }

  // Fills in aux variables of `side` (0 env, 1 sys) in `bits` from their
  // definitions; leaves them false if the definitions allow no value.
  void complete_aux(std::vector<bool>& bits, int side, bool initial) const {
    const Game& g = game();
    Manager& M = *g.mgr;
    std::vector<VarId> known, aux;
    for (const auto& v : g.enc.vars()) {
      bool own = v.env == (side == 0);
      for (VarId b : g.enc.var_bits(v, !initial)) (v.aux && own ? aux : known).push_back(b);
    }
    if (aux.empty()) return;
    std::vector<std::pair<VarId, bool>> lits;
    if (!initial)
      for (VarId b : g.cur_vars) lits.emplace_back(b, bits[b]);
    for (VarId b : known) lits.emplace_back(b, bits[b]);
    Bdd f = M.restrict(initial ? def_init_[side] : def_step_[side], M.minterm(lits));
    auto pick = M.pick_one(f, aux);
    for (std::size_t k = 0; k < aux.size(); ++k) bits[aux[k]] = pick ? (*pick)[k] : false;
  }

  void set_human(std::vector<bool>& bits, const Assignment& move, bool initial) const {
    for (std::size_t k = 0; k < human_.size(); ++k) {
      const auto& v = game().enc.vars()[human_[k]];
      auto ids = game().enc.var_bits(v, !initial);
      for (unsigned b = 0; b < v.nbits; ++b) bits[ids[b]] = (move[k] >> (v.nbits - 1 - b)) & 1;
    }
  }

  [[nodiscard]] std::vector<ViolationRef> check(const std::vector<bool>& bits, bool initial) const {
    const Game& g = game();
    std::set<ViolationRef> out;
    const auto* ns = g.spec.get();
    // Invariants are read on the state reached, transition constraints on
    // the step taken.
    std::vector<bool> now(bits.size());
    game().enc.store(game().enc.decode(bits, !initial), now, false);
    for (std::size_t k = 0; k < g.parts.size(); ++k) {
      const auto& p = g.parts[k];
      if (p.prov.kind == spec::ConstraintKind::Justice) continue;
      bool invariant = p.prov.kind == spec::ConstraintKind::Safety && invariant_[k];
      if (initial ? p.prov.kind == spec::ConstraintKind::Safety && !invariant
                  : p.prov.kind == spec::ConstraintKind::Initial)
        continue;
      if (g.mgr->eval(p.bdd, invariant ? now : bits)) continue;
      std::string kind = ns && p.prov.origin ? spec::to_string(ns->origins[*p.prov.origin].kind)
                                             : spec::to_string(p.prov.kind);
      out.insert({spec::to_string(p.prov.side), p.prov.label, kind});
    }
    // Pattern monitors in a violating state.
    for (const auto& [o, bad] : monitors_)
      if (g.mgr->eval(bad, now)) {
        const auto& origin = ns->origins[o];
        out.insert({spec::to_string(origin.side), origin.label, spec::to_string(origin.kind)});
      }
    return {out.begin(), out.end()};
  }

  void score(const std::vector<bool>& bits) {
    const Game& g = game();
    for (std::size_t k = 0; k < score_.size(); ++k) {
      const Bdd& j = k < g.m() ? g.je[k] : g.js[k - g.m()];
      bool holds = g.mgr->eval(j, bits);
      score_[k].since = holds ? 0 : score_[k].since + 1;
    }
  }

  // Status after the state changed: is the human side (or the strategy)
  // left without a move?
  void refresh_status() {
    if (status_ == Status::OffStrategy) return;
    if (!state_) {
      status_ = Status::AwaitingInitial;
      // No initial choice at all loses for the side that lacks one.
      if (allowed(true).is_false())
        status_ = mode_ == Mode::HumanEnv || game().theta_e.is_false() ? Status::EnvDeadlock : Status::SysDeadlock;
      return;
    }
    status_ = Status::Running;
    const Game& g = game();
    Manager& M = *g.mgr;
    Bdd cur = current_cube();
    if (M.restrict(trans_[0], cur).is_false()) {
      status_ = Status::EnvDeadlock;
      return;
    }
    if (mode_ == Mode::HumanSys && allowed(false).is_false()) status_ = Status::SysDeadlock;
    if (mode_ == Mode::FreePlay && M.restrict(trans_[0] & trans_[1], cur).is_false()) status_ = Status::SysDeadlock;
  }

  const TraceStep& record(TraceStep step, const std::vector<bool>& state_bits) {
    for (const auto& v : step.violations) violated_.insert(v);
    score(state_bits);
    state_ = step.state;
    node_ = step.strategy_state;
    refresh_status();
    step.status = status_;
    trace_.push_back(std::move(step));
    return trace_.back();
  }

  const TraceStep& start(const Assignment& move) {
    const Game& g = game();
    Manager& M = *g.mgr;
    std::vector<bool> bits(g.enc.num_bdd_vars());
    TraceStep step;
    step.move = move;
    if (mode_ == Mode::HumanSys) {
      Assignment e = *pending_env_move();
      std::size_t k = 0;
      Assignment full(g.enc.vars().size(), 0);
      for (std::size_t v = 0; v < full.size(); ++v)
        if (g.enc.vars()[v].env) full[v] = e[k++];
      g.enc.store(full, bits, false);
    }
    set_human(bits, move, true);
    if (mode_ != Mode::HumanSys) complete_aux(bits, 0, true);
    if (mode_ != Mode::HumanEnv) complete_aux(bits, 1, true);
    Bdd mine = allowed(true);
    bool legal = M.eval(mine, bits);
    if (!legal && policy_ == Policy::Reject) throw IllegalMove("initial move violates the human side's initial constraints");

    if (mode_ == Mode::HumanEnv) {
      // The controller has one initial state per initial env choice.
      const auto& c = *art_->controller;
      Assignment env = env_part(g.enc.decode(bits));
      for (std::size_t id : c.initial)
        if (env_part(c.states[id].assignment) == env) step.strategy_state = id;
      if (step.strategy_state) g.enc.store(c.states[*step.strategy_state].assignment, bits, false);
    } else if (mode_ == Mode::HumanSys) {
      const auto& cs = *art_->counter;
      Assignment a = g.enc.decode(bits);
      for (std::size_t id : cs.initial)
        if (cs.states[id].assignment == a) step.strategy_state = id;
      if (step.strategy_state) step.purpose = cs.states[*step.strategy_state].annotation;
    }
    step.state = g.enc.decode(bits);
    step.violations = check(bits, true);
    if (mode_ != Mode::FreePlay && !step.strategy_state) status_ = Status::OffStrategy;
    return record(std::move(step), bits);
  }

  const TraceStep& advance(const Assignment& move) {
    const Game& g = game();
    Manager& M = *g.mgr;
    std::vector<bool> bits(g.enc.num_bdd_vars());
    g.enc.store(*state_, bits, false);
    g.enc.store(*state_, bits, true);
    TraceStep step;
    step.move = move;
    if (mode_ == Mode::HumanSys) {
      Bdd env = env_move_cube(false);
      auto e = M.pick_one(env, g.env_next_vars);
      for (std::size_t k = 0; k < g.env_next_vars.size(); ++k) bits[g.env_next_vars[k]] = (*e)[k];
    }
    set_human(bits, move, false);
    if (mode_ != Mode::HumanSys) complete_aux(bits, 0, false);
    if (mode_ != Mode::HumanEnv) complete_aux(bits, 1, false);
    bool legal = M.eval(allowed(false), bits);
    if (!legal && policy_ == Policy::Reject) throw IllegalMove("move violates the human side's constraints");

    std::optional<std::size_t> node;
    if (mode_ == Mode::HumanEnv && legal) {
      const auto& c = *art_->controller;
      Assignment next = g.enc.decode(bits, true);
      Assignment input;
      for (std::size_t v : c.input_vars()) input.push_back(next[v]);
      for (std::size_t t : out_of(c, *node_))
        if (c.transitions[t].input == input) {
          node = c.transitions[t].to;
          step.annotation = c.transitions[t].annotation;
          g.enc.store(c.states[*node].assignment, bits, true);
        }
    } else if (mode_ == Mode::HumanSys && legal) {
      const auto& cs = *art_->counter;
      Assignment next = g.enc.decode(bits, true);
      Assignment input;
      for (std::size_t v : cs.input_vars()) input.push_back(next[v]);
      for (std::size_t t : out_of(cs, *node_))
        if (cs.transitions[t].input == input) {
          node = cs.transitions[t].to;
          step.annotation = cs.transitions[t].annotation;
          step.purpose = cs.states[*node].annotation;
        }
    }
    step.state = g.enc.decode(bits, true);
    step.strategy_state = node;
    step.violations = check(bits, false);
    if (mode_ != Mode::FreePlay && !node) status_ = Status::OffStrategy;
    std::vector<bool> now(g.enc.num_bdd_vars());
    g.enc.store(step.state, now, false);
    return record(std::move(step), now);
  }

  // Outgoing transitions of a strategy state, computed once per strategy.
  const std::vector<std::size_t>& out_of(const Strategy& s, std::size_t id) {
    if (outgoing_.empty()) outgoing_ = s.outgoing();
    return outgoing_[id];
  }

  std::shared_ptr<const Artifact> art_;
  Mode mode_;
  Policy policy_;
  std::vector<std::size_t> human_;
  Bdd def_init_[2], def_step_[2], trans_[2];
  std::vector<bool> invariant_;  // per game part: mentions current bits only
  std::optional<Assignment> state_;
  std::optional<std::size_t> node_;
  Status status_ = Status::AwaitingInitial;
  std::vector<TraceStep> trace_;
  std::vector<ScoreEntry> score_;
  std::set<ViolationRef> violated_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::pair<std::size_t, Bdd>> monitors_;
};

/// Replays the human moves of `steps` in a fresh session.
inline Session replay(std::shared_ptr<const Artifact> art, Mode mode, Policy policy, const std::vector<Assignment>& moves) {
  Session s(std::move(art), mode, policy);
  for (const auto& m : moves) s.step(m);
  return s;
}

}  // namespace gr1::playout
