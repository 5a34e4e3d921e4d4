#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gr1/bdd/manager.hpp"
#include "gr1/bdd/util.hpp"
#include "gr1/pattern/normalize.hpp"

namespace gr1::synth {

using bdd::Bdd;
using bdd::Manager;
using bdd::VarId;
using spec::ExprKind;
using spec::ExprPtr;

/// One state variable of the game and the bits that encode it.
struct StateVar {
  std::string name;
  spec::Domain domain;
  bool env = true;          // owner after resolving aux ownership
  bool aux = false;         // declared spec_ aux or generated
  bool generated = false;   // introduced by a pattern or past operator
  unsigned first_bit = 0;
  unsigned nbits = 1;
  std::optional<std::size_t> origin;  // defining constraint of generated vars
};

/// Full assignment of state variables: boolean 0/1 or enumeration index.
using Assignment = std::vector<int>;

inline unsigned bits_for_domain(const spec::Domain& d) {
  if (d.is_bool()) return 1;
  unsigned b = 0;
  while ((std::size_t{1} << b) < d.values.size()) ++b;
  return b;
}

/// Bit layout and expression translation.  Bit k of the state has BDD
/// variable 2k (current) and 2k+1 (next).  Enumerations are binary coded
/// with the first bit most significant.
class Encoding {
 public:
  Encoding() = default;

  void add(StateVar v) {
    v.first_bit = num_bits_;
    v.nbits = bits_for_domain(v.domain);
    num_bits_ += v.nbits;
    index_[v.name] = vars_.size();
    for (unsigned b = 0; b < v.nbits; ++b) bit_env_.push_back(v.env);
    vars_.push_back(std::move(v));
  }

  /// Layout for a normalized spec: env, sys, manual aux, generated aux.
  static Encoding from_spec(const pattern::NormalizedSpec& ns) {
    Encoding enc;
    const auto& doc = ns.source;
    for (const auto& v : doc.env_vars) enc.add({v.name, v.domain, true, false, false, 0, 1, std::nullopt});
    for (const auto& v : doc.sys_vars) enc.add({v.name, v.domain, false, false, false, 0, 1, std::nullopt});
    for (const auto& v : doc.aux_vars) enc.add({v.name, v.domain, false, true, false, 0, 1, std::nullopt});
    for (const auto& g : ns.generated) {
      StateVar sv{g.decl.name, g.decl.domain, g.side == spec::Side::Assumption, true, true, 0, 1, g.origin};
      enc.add(sv);
    }
    return enc;
  }

  [[nodiscard]] const std::vector<StateVar>& vars() const { return vars_; }
  [[nodiscard]] unsigned num_bits() const { return num_bits_; }
  [[nodiscard]] unsigned num_bdd_vars() const { return 2 * num_bits_; }
  [[nodiscard]] bool bit_is_env(unsigned bit) const { return bit_env_[bit]; }

  [[nodiscard]] const StateVar* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &vars_[it->second];
  }
  [[nodiscard]] std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown variable '" + name + "'");
    return it->second;
  }

  [[nodiscard]] std::vector<VarId> bdd_vars(bool env, bool sys, bool primed) const {
    std::vector<VarId> out;
    for (unsigned b = 0; b < num_bits_; ++b)
      if (bit_env_[b] ? env : sys) out.push_back(primed ? bdd::primed(b) : bdd::unprimed(b));
    return out;
  }
  [[nodiscard]] std::vector<VarId> var_bits(const StateVar& v, bool primed) const {
    std::vector<VarId> out;
    for (unsigned b = 0; b < v.nbits; ++b)
      out.push_back(primed ? bdd::primed(v.first_bit + b) : bdd::unprimed(v.first_bit + b));
    return out;
  }

  /// v = value (index into the domain; 0/1 for booleans).
  [[nodiscard]] Bdd value(Manager& mgr, const StateVar& v, int val, bool primed) const {
    std::vector<std::pair<VarId, bool>> lits;
    auto bits = var_bits(v, primed);
    for (unsigned b = 0; b < v.nbits; ++b) lits.emplace_back(bits[b], (val >> (v.nbits - 1 - b)) & 1);
    return mgr.minterm(lits);
  }

  /// Valid codes of v.
  [[nodiscard]] Bdd domain(Manager& mgr, const StateVar& v, bool primed) const {
    if (v.domain.is_bool() || v.domain.values.size() == (std::size_t{1} << v.nbits)) return mgr.bdd_true();
    Bdd out = mgr.bdd_false();
    for (std::size_t i = 0; i < v.domain.values.size(); ++i) out |= value(mgr, v, static_cast<int>(i), primed);
    return out;
  }

  [[nodiscard]] Bdd encode(Manager& mgr, const ExprPtr& e, bool primed = false) const {
    switch (e->kind) {
      case ExprKind::BoolConst: return mgr.constant(e->value);
      case ExprKind::Ident: {
        const StateVar* v = find(e->name);
        if (!v || !v->domain.is_bool()) throw std::logic_error("not a boolean variable: " + e->name);
        Bdd x = mgr.var(primed ? bdd::primed(v->first_bit) : bdd::unprimed(v->first_bit));
        return x;
      }
      case ExprKind::Not: return !encode(mgr, e->args[0], primed);
      case ExprKind::And: return encode(mgr, e->args[0], primed) & encode(mgr, e->args[1], primed);
      case ExprKind::Or: return encode(mgr, e->args[0], primed) | encode(mgr, e->args[1], primed);
      case ExprKind::Imp: return encode(mgr, e->args[0], primed).implies(encode(mgr, e->args[1], primed));
      case ExprKind::Iff: return encode(mgr, e->args[0], primed).iff(encode(mgr, e->args[1], primed));
      case ExprKind::Eq:
      case ExprKind::Neq: {
        Bdd eq = equality(mgr, e->args[0], e->args[1], primed);
        return e->kind == ExprKind::Eq ? eq : !eq;
      }
      case ExprKind::Next:
        if (primed) throw std::logic_error("nested next");
        return encode(mgr, e->args[0], true);
      default: throw std::logic_error("past operator reached the encoder");
    }
  }

  /// Decodes the current-state (or next-state) bits of a full BDD
  /// assignment indexed by BDD variable.
  [[nodiscard]] Assignment decode(const std::vector<bool>& bits, bool primed = false) const {
    Assignment out;
    for (const auto& v : vars_) {
      int val = 0;
      for (unsigned b = 0; b < v.nbits; ++b) {
        VarId id = primed ? bdd::primed(v.first_bit + b) : bdd::unprimed(v.first_bit + b);
        val = (val << 1) | (bits[id] ? 1 : 0);
      }
      out.push_back(val);
    }
    return out;
  }

  /// Writes an assignment into a BDD-variable-indexed bit vector.
  void store(const Assignment& a, std::vector<bool>& bits, bool primed) const {
    if (bits.size() < num_bdd_vars()) bits.resize(num_bdd_vars());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto& v = vars_[i];
      for (unsigned b = 0; b < v.nbits; ++b) {
        VarId id = primed ? bdd::primed(v.first_bit + b) : bdd::unprimed(v.first_bit + b);
        bits[id] = (a[i] >> (v.nbits - 1 - b)) & 1;
      }
    }
  }

  /// Minterm fixing every variable of the given owner(s) to its value in `a`.
  [[nodiscard]] Bdd cube_of(Manager& mgr, const Assignment& a, bool env, bool sys, bool primed) const {
    Bdd out = mgr.bdd_true();
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].env ? env : sys) out &= value(mgr, vars_[i], a[i], primed);
    return out;
  }

  [[nodiscard]] std::string value_name(std::size_t var, int val) const {
    const auto& d = vars_[var].domain;
    if (d.is_bool()) return val ? "true" : "false";
    if (val < 0 || static_cast<std::size_t>(val) >= d.values.size()) return "#" + std::to_string(val);
    return d.values[static_cast<std::size_t>(val)];
  }
  /// Parses a value written as true/false/1/0 or an enumeration literal;
  /// -1 if invalid.
  [[nodiscard]] int parse_value(std::size_t var, const std::string& s) const {
    const auto& d = vars_[var].domain;
    if (d.is_bool()) {
      if (s == "true" || s == "1" || s == "TRUE") return 1;
      if (s == "false" || s == "0" || s == "FALSE") return 0;
      return -1;
    }
    return d.index_of(s);
  }

 private:
  // Operand of an (in)equality: a variable (possibly under next) or a literal.
  struct Operand {
    const StateVar* var = nullptr;
    bool primed = false;
    std::string literal;
    ExprPtr expr;
  };
  [[nodiscard]] Operand operand(const ExprPtr& e, bool primed) const {
    if (e->kind == ExprKind::Next) return operand(e->args[0], true);
    if (e->kind == ExprKind::Ident) {
      if (const StateVar* v = find(e->name)) return {v, primed, {}, nullptr};
      return {nullptr, primed, e->name, nullptr};
    }
    return {nullptr, primed, {}, e};
  }

  [[nodiscard]] Bdd equality(Manager& mgr, const ExprPtr& a, const ExprPtr& b, bool primed) const {
    Operand x = operand(a, primed), y = operand(b, primed);
    auto boolean = [&](const Operand& o, const ExprPtr& src) {
      if (o.var) return mgr.var(o.primed ? bdd::primed(o.var->first_bit) : bdd::unprimed(o.var->first_bit));
      if (o.expr) return encode(mgr, o.expr, o.primed);
      return encode(mgr, src, primed);
    };
    bool enum_x = x.var && !x.var->domain.is_bool();
    bool enum_y = y.var && !y.var->domain.is_bool();
    if (!enum_x && !enum_y) {
      if (!x.literal.empty() || !y.literal.empty()) throw std::logic_error("enumeration literal in boolean comparison");
      return boolean(x, a).iff(boolean(y, b));
    }
    if (enum_x && enum_y) {
      Bdd out = mgr.bdd_true();
      auto bx = var_bits(*x.var, x.primed), by = var_bits(*y.var, y.primed);
      for (unsigned k = 0; k < x.var->nbits; ++k) out &= mgr.var(bx[k]).iff(mgr.var(by[k]));
      return out;
    }
    const Operand& v = enum_x ? x : y;
    const Operand& lit = enum_x ? y : x;
    int idx = v.var->domain.index_of(lit.literal);
    if (idx < 0) throw std::logic_error("'" + lit.literal + "' is not a value of " + v.var->name);
    return value(mgr, *v.var, idx, v.primed);
  }

  std::vector<StateVar> vars_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<bool> bit_env_;
  unsigned num_bits_ = 0;
};

}  // namespace gr1::synth
