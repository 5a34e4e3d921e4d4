#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "gr1/spec/ast.hpp"
#include "gr1/spec/printer.hpp"

namespace gr1::pattern {

using spec::ExprPtr;
using spec::PatternId;
using spec::PatternInstance;
using spec::Side;
namespace ex = spec::ex;

/// Generates variable names that are unique within one specification.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<std::string> taken) : taken_(std::move(taken)) {}

  std::string make(const std::string& hint) {
    std::string base = std::string(spec::kPatternAuxPrefix) + hint;
    std::string name = base;
    for (int k = 1; taken_.count(name); ++k) name = base + "_" + std::to_string(k);
    taken_.insert(name);
    return name;
  }
  void reserve(const std::string& n) { taken_.insert(n); }

 private:
  std::set<std::string> taken_;
};

/// Deterministic monitor replacing a pattern instance or a past operator:
/// boolean auxiliary variables, their initial and update constraints, and
/// the justice constraints the monitor contributes.
struct TemplateExpansion {
  std::vector<spec::VarDecl> new_aux_vars;
  std::vector<ExprPtr> initial;
  std::vector<ExprPtr> safety;
  std::vector<ExprPtr> justice;
  /// Current-state predicate that holds once the monitored property has
  /// been violated for good (null for pure liveness patterns).
  ExprPtr violation;
  Side side = Side::Assumption;
  spec::SourceSpan attributed_to;

  void append(const TemplateExpansion& o) {
    new_aux_vars.insert(new_aux_vars.end(), o.new_aux_vars.begin(), o.new_aux_vars.end());
    initial.insert(initial.end(), o.initial.begin(), o.initial.end());
    safety.insert(safety.end(), o.safety.begin(), o.safety.end());
    justice.insert(justice.end(), o.justice.begin(), o.justice.end());
  }
};

namespace detail {

inline spec::VarDecl bool_aux(const std::string& name) {
  spec::VarDecl v;
  v.name = name;
  v.owner = spec::Owner::Aux;
  return v;
}

inline ExprPtr conj(std::vector<ExprPtr> xs) {
  if (xs.empty()) return ex::boolean(true);
  ExprPtr r = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) r = ex::land(r, xs[i]);
  return r;
}
inline ExprPtr disj(std::vector<ExprPtr> xs) {
  if (xs.empty()) return ex::boolean(false);
  ExprPtr r = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) r = ex::lor(r, xs[i]);
  return r;
}

/// Monitor given as an explicit automaton over the letters of `params`
/// (letter bit i = value of params[i]).  States are binary coded over
/// `bits` (most significant first); codes without a state go to `sink`.
struct TableMonitor {
  std::vector<std::string> bits;
  unsigned states = 0;
  unsigned init = 0;
  unsigned sink = 0;
  std::function<unsigned(unsigned state, unsigned letter)> delta;

  [[nodiscard]] ExprPtr is_state(unsigned s) const {
    std::vector<ExprPtr> lits;
    for (std::size_t b = 0; b < bits.size(); ++b) {
      bool on = (s >> (bits.size() - 1 - b)) & 1U;
      lits.push_back(on ? ex::ident(bits[b]) : ex::lnot(ex::ident(bits[b])));
    }
    return conj(lits);
  }

  void emit(const std::vector<ExprPtr>& params, TemplateExpansion& out) const {
    unsigned letters = 1U << params.size();
    auto letter_expr = [&](unsigned l) {
      std::vector<ExprPtr> lits;
      for (std::size_t i = 0; i < params.size(); ++i)
        lits.push_back((l >> i) & 1U ? params[i] : ex::lnot(params[i]));
      return conj(lits);
    };
    unsigned codes = 1U << bits.size();
    for (const auto& b : bits) out.new_aux_vars.push_back(bool_aux(b));
    out.initial.push_back(is_state(init));
    for (std::size_t b = 0; b < bits.size(); ++b) {
      std::vector<ExprPtr> cases;
      for (unsigned s = 0; s < codes; ++s) {
        std::vector<ExprPtr> on;
        for (unsigned l = 0; l < letters; ++l) {
          unsigned t = s < states ? delta(s, l) : sink;
          if ((t >> (bits.size() - 1 - b)) & 1U) on.push_back(letter_expr(l));
        }
        if (on.empty()) continue;
        cases.push_back(on.size() == letters ? is_state(s) : ex::land(is_state(s), disj(on)));
      }
      out.safety.push_back(ex::iff(ex::next(ex::ident(bits[b])), disj(cases)));
    }
  }
};

inline unsigned bits_for(unsigned states) {
  unsigned b = 1;
  while ((1U << b) < states) ++b;
  return b;
}

}  // namespace detail

/// Replaces a pattern instance by a monitor.  `hint` names the generated
/// variables.
inline TemplateExpansion expand_pattern(const PatternInstance& inst, FreshNames& fresh,
                                        const std::string& hint) {
  using namespace ex;
  TemplateExpansion out;
  out.side = inst.side;
  out.attributed_to = inst.span;
  switch (inst.id) {
    case PatternId::P26: {
      // G (p -> F s): pending holds while some p is not yet answered.
      std::string pend = fresh.make(hint + "_pending");
      out.new_aux_vars.push_back(detail::bool_aux(pend));
      out.initial.push_back(lnot(ident(pend)));
      out.safety.push_back(
          iff(next(ident(pend)), land(lor(ident(pend), inst.p), lnot(inst.s))));
      out.justice.push_back(lnot(ident(pend)));
      break;
    }
    case PatternId::P09: {
      // G ((q & !r & F r) -> (!r U (p & !r)))
      std::string fail = fresh.make(hint + "_fail");
      std::string wait = fresh.make(hint + "_wait");
      out.new_aux_vars = {detail::bool_aux(fail), detail::bool_aux(wait)};
      out.initial.push_back(land(lnot(ident(fail)), lnot(ident(wait))));
      ExprPtr fail_next = lor(ident(fail), land(ident(wait), inst.r));
      out.safety.push_back(iff(next(ident(fail)), fail_next));
      out.safety.push_back(iff(next(ident(wait)),
                               land(land(lnot(fail_next), lnot(inst.r)),
                                    land(lnot(inst.p), lor(ident(wait), inst.q)))));
      out.justice.push_back(lnot(ident(fail)));
      out.violation = ident(fail);
      break;
    }
    case PatternId::P20: {
      // G ((q & !r) -> (p W r))
      std::string fail = fresh.make(hint + "_fail");
      std::string act = fresh.make(hint + "_active");
      out.new_aux_vars = {detail::bool_aux(fail), detail::bool_aux(act)};
      out.initial.push_back(land(lnot(ident(fail)), lnot(ident(act))));
      ExprPtr obliged = land(lor(ident(act), inst.q), lnot(inst.r));
      ExprPtr fail_next = lor(ident(fail), land(obliged, lnot(inst.p)));
      out.safety.push_back(iff(next(ident(fail)), fail_next));
      out.safety.push_back(iff(next(ident(act)), land(lnot(fail_next), obliged)));
      out.justice.push_back(lnot(ident(fail)));
      out.violation = ident(fail);
      break;
    }
    case PatternId::P15: {
      // At most k positions with p from a q (with !r) up to the next r.
      // States: 0 idle, 1+c counting c occurrences (c <= k), k+2 exceeded,
      // k+3 fail.
      const unsigned k = static_cast<unsigned>(inst.bound);
      const unsigned exceeded = k + 2, failed = k + 3;
      detail::TableMonitor m;
      m.states = k + 4;
      m.init = 0;
      m.sink = failed;
      unsigned nbits = detail::bits_for(m.states);
      for (unsigned b = 0; b < nbits; ++b) m.bits.push_back(fresh.make(hint + "_c" + std::to_string(b)));
      m.delta = [=](unsigned s, unsigned l) -> unsigned {
        bool p = l & 1U, q = l & 2U, r = l & 4U;
        auto count = [&](unsigned c) { return c > k ? exceeded : 1 + c; };
        if (s == failed) return failed;
        if (s == exceeded) return r ? failed : exceeded;
        if (s == 0) return q && !r ? count(p ? 1 : 0) : 0;
        if (r) return 0;
        return count(s - 1 + (p ? 1 : 0));
      };
      m.emit({inst.p, inst.q, inst.r}, out);
      ExprPtr is_fail = m.is_state(failed);
      out.justice.push_back(lnot(is_fail));
      out.violation = is_fail;
      break;
    }
  }
  return out;
}

/// LTL reading of each pattern and the shape of its monitor.
struct CatalogEntry {
  PatternId id;
  const char* name;
  const char* syntax;
  const char* ltl;
  const char* monitor;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {PatternId::P09, "existence, between q and r", "(p) becomes true between (q) and (r);",
       "G ((q & !r & F r) -> (!r U (p & !r)))",
       "2 aux bits (fail, wait); 1 initial, 2 safety, 1 justice G F !fail"},
      {PatternId::P15, "bounded existence, between q and r",
       "(p) occurs at most <k> times between (q) and (r);",
       "G ((q & !r & F r) -> !phi(k+1)), phi(1) = !r U (p & !r), "
       "phi(j+1) = !r U (p & !r & X phi(j))",
       "ceil(log2(k+4)) aux bits (idle, k+1 counter values, exceeded, fail); 1 initial, one "
       "safety per bit, 1 justice G F !fail"},
      {PatternId::P20, "universality, after q until r", "Globally (p) after (q) until (r);",
       "G ((q & !r) -> (p W r))",
       "2 aux bits (fail, active); 1 initial, 2 safety, 1 justice G F !fail"},
      {PatternId::P26, "response, globally", "Globally (p) leads to (s);", "G (p -> F s)",
       "1 aux bit (pending); 1 initial, 1 safety, 1 justice G F !pending"},
  };
  return entries;
}

}  // namespace gr1::pattern
