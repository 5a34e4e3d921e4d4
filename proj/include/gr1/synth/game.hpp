#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1/synth/encoding.hpp"

namespace gr1::synth {

using pattern::Role;
using spec::ConstraintKind;
using spec::Side;

/// Where a conjunct of the game came from.
struct Provenance {
  Side side = Side::Assumption;
  ConstraintKind kind = ConstraintKind::Initial;
  std::optional<std::size_t> origin;  // index into NormalizedSpec::origins
  Role role = Role::Body;
  std::string label;  // source label, "domain", or "padding"
};

struct Part {
  Bdd bdd;
  Provenance prov;
};

/// Symbolic GR(1) game.  Env moves first (primed env bits via rho_e), then
/// sys answers (primed sys bits via rho_s).
struct Game {
  std::shared_ptr<Manager> mgr;  // first member: outlives every Bdd below
  Encoding enc;
  std::shared_ptr<const pattern::NormalizedSpec> spec;  // null for synthetic games

  Bdd theta_e, theta_s, rho_e, rho_s;
  std::vector<Bdd> je, js;
  std::vector<Provenance> je_prov, js_prov;
  std::vector<Part> parts;  // all conjuncts of theta/rho and justice

  std::vector<VarId> cur_vars, env_cur_vars, sys_cur_vars, env_next_vars, sys_next_vars, next_vars;
  Bdd env_next_cube, sys_next_cube, next_cube, env_cur_cube, sys_cur_cube, cur_cube;

  [[nodiscard]] std::size_t m() const { return je.size(); }
  [[nodiscard]] std::size_t n() const { return js.size(); }

  [[nodiscard]] Bdd prime(const Bdd& f) const { return bdd::to_primed(*mgr, f); }
  [[nodiscard]] Bdd unprime(const Bdd& f) const { return bdd::to_unprimed(*mgr, f); }

  /// Fills cubes and pads empty justice lists with `true`.
  void finalize() {
    Manager& M = *mgr;
    cur_vars = enc.bdd_vars(true, true, false);
    env_cur_vars = enc.bdd_vars(true, false, false);
    sys_cur_vars = enc.bdd_vars(false, true, false);
    env_next_vars = enc.bdd_vars(true, false, true);
    sys_next_vars = enc.bdd_vars(false, true, true);
    next_vars = enc.bdd_vars(true, true, true);
    env_next_cube = M.cube(env_next_vars);
    sys_next_cube = M.cube(sys_next_vars);
    next_cube = M.cube(next_vars);
    env_cur_cube = M.cube(env_cur_vars);
    sys_cur_cube = M.cube(sys_cur_vars);
    cur_cube = M.cube(cur_vars);
    if (je.empty()) {
      je.push_back(M.bdd_true());
      je_prov.push_back({Side::Assumption, ConstraintKind::Justice, std::nullopt, Role::Body, "padding"});
    }
    if (js.empty()) {
      js.push_back(M.bdd_true());
      js_prov.push_back({Side::Guarantee, ConstraintKind::Justice, std::nullopt, Role::Body, "padding"});
    }
  }

  /// Variables of the full current/next state, in BDD order.
  [[nodiscard]] std::vector<VarId> all_vars() const {
    std::vector<VarId> out;
    for (unsigned v = 0; v < enc.num_bdd_vars(); ++v) out.push_back(v);
    return out;
  }

  [[nodiscard]] std::string format(const Assignment& a) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) os << ' ';
      os << enc.vars()[i].name << '=' << enc.value_name(i, a[i]);
    }
    return os.str();
  }
};

namespace detail {

inline std::string origin_label(const pattern::NormalizedSpec& ns, std::size_t origin) {
  return ns.origins[origin].label;
}

}  // namespace detail

/// Translates a normalized specification into a symbolic game.  Assumption
/// side aux updates go to rho_e, guarantee side ones to rho_s; enumeration
/// domains are conjoined to the side owning the variable.
inline Game build_game(const pattern::NormalizedSpec& ns) {
  Game g;
  g.spec = std::make_shared<pattern::NormalizedSpec>(ns);
  g.enc = Encoding::from_spec(ns);
  g.mgr = std::make_shared<Manager>(g.enc.num_bdd_vars());
  Manager& M = *g.mgr;
  g.theta_e = g.theta_s = g.rho_e = g.rho_s = M.bdd_true();

  for (const auto& c : ns.constraints) {
    Provenance p{c.side, c.kind, c.origin, c.role, detail::origin_label(ns, c.origin)};
    Bdd b = g.enc.encode(M, c.expr);
    bool env = c.side == Side::Assumption;
    switch (c.kind) {
      case ConstraintKind::Initial: (env ? g.theta_e : g.theta_s) &= b; break;
      case ConstraintKind::Safety: (env ? g.rho_e : g.rho_s) &= b; break;
      case ConstraintKind::Justice:
        (env ? g.je : g.js).push_back(b);
        (env ? g.je_prov : g.js_prov).push_back(p);
        break;
      case ConstraintKind::Pattern: throw std::logic_error("pattern reached the game builder");
    }
    g.parts.push_back({b, p});
  }
  for (const auto& v : g.enc.vars()) {
    Bdd cur = g.enc.domain(M, v, false), nxt = g.enc.domain(M, v, true);
    if (cur.is_true()) continue;
    Side side = v.env ? Side::Assumption : Side::Guarantee;
    (v.env ? g.theta_e : g.theta_s) &= cur;
    (v.env ? g.rho_e : g.rho_s) &= nxt;
    g.parts.push_back({cur, {side, ConstraintKind::Initial, std::nullopt, Role::Definition, "domain"}});
    g.parts.push_back({nxt, {side, ConstraintKind::Safety, std::nullopt, Role::Definition, "domain"}});
  }
  g.finalize();
  return g;
}

/// Aux variable whose definition does not determine a unique value.
struct AuxError {
  enum class Kind { Incomplete, Nondeterministic };
  Kind kind = Kind::Incomplete;
  std::string var;
  bool initial = false;  // failure of the initial value rather than the update
  std::string witness;   // state (and next inputs) where it happens

  [[nodiscard]] std::string to_string() const {
    std::string k = kind == Kind::Incomplete ? "AuxIncomplete" : "AuxNondeterministic";
    return k + "(" + var + (initial ? ", initial" : "") + "): " + witness;
  }
};

class AuxValidationError : public std::runtime_error {
 public:
  explicit AuxValidationError(AuxError e) : std::runtime_error(e.to_string()), error_(std::move(e)) {}
  [[nodiscard]] const AuxError& error() const { return error_; }

 private:
  AuxError error_;
};

namespace detail {

// States where f has no solution / more than one solution over `vars`.
inline Bdd none_of(Manager& M, const Bdd& f, const std::vector<VarId>& vars) {
  return !M.exists(f, M.cube(vars));
}
inline Bdd several_of(Manager& M, const Bdd& f, const std::vector<VarId>& vars) {
  if (vars.empty()) return M.bdd_false();
  std::vector<VarId> rest(vars.begin() + 1, vars.end());
  Bdd f0 = M.restrict(f, M.nvar(vars[0])), f1 = M.restrict(f, M.var(vars[0]));
  Bdd rc = M.cube(rest);
  return (M.exists(f0, rc) & M.exists(f1, rc)) | several_of(M, f0, rest) | several_of(M, f1, rest);
}

}  // namespace detail

/// Checks that every declared and generated aux variable has exactly one
/// initial value and exactly one next value for every state and every
/// choice of the other next values.
inline std::optional<AuxError> validate_aux(const Game& g) {
  Manager& M = *g.mgr;
  Bdd valid_cur = M.bdd_true();
  for (const auto& v : g.enc.vars()) valid_cur &= g.enc.domain(M, v, false) & g.enc.domain(M, v, true);
  auto witness = [&](const Bdd& bad, bool with_next) {
    auto bits = M.pick_one(bad, g.all_vars());
    std::vector<bool> full = *bits;
    std::string w = g.format(g.enc.decode(full, false));
    if (with_next) w += " / next: " + g.format(g.enc.decode(full, true));
    return w;
  };
  // Aux variables defined together (a multi-bit monitor, or updates that
  // read each other's next value) are checked as one group.
  const auto& vars = g.enc.vars();
  std::vector<std::size_t> group(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) group[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return group[i] == i ? i : group[i] = root(group[i]);
  };
  auto mentioned = [&](const Part& p) {
    bool primed = p.prov.kind == ConstraintKind::Safety;
    std::vector<std::size_t> out;
    auto sup = M.support(p.bdd);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!vars[i].aux) continue;
      for (VarId id : g.enc.var_bits(vars[i], primed))
        if (std::find(sup.begin(), sup.end(), id) != sup.end()) {
          out.push_back(i);
          break;
        }
    }
    return out;
  };
  std::vector<const Part*> defs;
  for (const auto& p : g.parts)
    if (p.prov.role == Role::Definition && p.prov.origin && p.prov.kind != ConstraintKind::Justice)
      defs.push_back(&p);
  std::vector<std::vector<std::size_t>> mentions;
  for (const Part* p : defs) {
    mentions.push_back(mentioned(*p));
    for (std::size_t k = 1; k < mentions.back().size(); ++k)
      group[root(mentions.back()[k])] = root(mentions.back()[0]);
  }
  for (std::size_t gi = 0; gi < vars.size(); ++gi) {
    if (!vars[gi].aux || root(gi) != gi) continue;
    std::vector<VarId> cur, nxt;
    std::string names;
    Bdd init = M.bdd_true(), step = M.bdd_true();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!vars[i].aux || root(i) != gi) continue;
      names += (names.empty() ? "" : ",") + vars[i].name;
      for (VarId id : g.enc.var_bits(vars[i], false)) cur.push_back(id);
      for (VarId id : g.enc.var_bits(vars[i], true)) nxt.push_back(id);
      init &= g.enc.domain(M, vars[i], false);
      step &= g.enc.domain(M, vars[i], true);
    }
    bool has_init = false, has_step = false;
    for (std::size_t d = 0; d < defs.size(); ++d) {
      bool ours = false;
      for (std::size_t i : mentions[d]) ours = ours || root(i) == gi;
      if (!ours) continue;
      if (defs[d]->prov.kind == ConstraintKind::Initial) {
        init &= defs[d]->bdd;
        has_init = true;
      } else {
        step &= defs[d]->bdd;
        has_step = true;
      }
    }
    if (!has_init) return AuxError{AuxError::Kind::Incomplete, names, true, "no initial constraint"};
    if (!has_step) return AuxError{AuxError::Kind::Incomplete, names, false, "no update constraint"};
    Bdd bad = detail::none_of(M, init, cur) & valid_cur;
    if (!bad.is_false()) return AuxError{AuxError::Kind::Incomplete, names, true, witness(bad, false)};
    bad = detail::several_of(M, init, cur) & valid_cur;
    if (!bad.is_false()) return AuxError{AuxError::Kind::Nondeterministic, names, true, witness(bad, false)};
    bad = detail::none_of(M, step, nxt) & valid_cur;
    if (!bad.is_false()) return AuxError{AuxError::Kind::Incomplete, names, false, witness(bad, true)};
    bad = detail::several_of(M, step, nxt) & valid_cur;
    if (!bad.is_false()) return AuxError{AuxError::Kind::Nondeterministic, names, false, witness(bad, true)};
  }
  return std::nullopt;
}

/// Parse-level document to validated game.
inline Game prepare_game(const spec::SpecDocument& doc) {
  Game g = build_game(pattern::normalize(doc));
  if (auto err = validate_aux(g)) throw AuxValidationError(*err);
  return g;
}

}  // namespace gr1::synth
