#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "gr1/pattern/past.hpp"
#include "gr1/pattern/templates.hpp"
#include "gr1/spec/printer.hpp"
#include "gr1/spec/typecheck.hpp"

namespace gr1::pattern {

using spec::ConstraintKind;

/// A declared constraint of the source document.
struct Origin {
  Side side = Side::Assumption;
  std::size_t index = 0;  // position within its side
  std::string label;
  std::string text;
  ConstraintKind kind = ConstraintKind::Initial;
  std::optional<PatternId> pattern;
  bool aux_definition = false;
  spec::SourceSpan span;
};

enum class Role {
  Body,        // the constraint itself (or its compiled monitor justice)
  Definition,  // initial/update constraint of a generated or manual aux var
};

/// Pure GR(1) constraint: Initial, Safety or Justice; no defines, patterns
/// or past operators.
struct Gr1Constraint {
  Side side = Side::Assumption;
  ConstraintKind kind = ConstraintKind::Initial;
  ExprPtr expr;
  std::size_t origin = 0;  // index into NormalizedSpec::origins
  Role role = Role::Body;
};

struct GeneratedAux {
  spec::VarDecl decl;
  Side side = Side::Assumption;
  std::size_t origin = 0;
  bool from_pattern = false;  // false: introduced for a past operator
};

struct NormalizedSpec {
  spec::SpecDocument source;
  spec::SpecDocument expanded;
  std::vector<Origin> origins;  // assumptions first, then guarantees
  std::vector<GeneratedAux> generated;
  std::vector<Gr1Constraint> constraints;
  /// Per origin: current-state predicate signalling a definite violation of
  /// a pattern monitor (null if none).
  std::vector<ExprPtr> monitor_violation;

  [[nodiscard]] std::size_t origin_of(Side side, std::size_t index) const {
    for (std::size_t i = 0; i < origins.size(); ++i)
      if (origins[i].side == side && origins[i].index == index) return i;
    throw std::out_of_range("no such constraint");
  }
  [[nodiscard]] std::size_t pattern_aux_bits() const {
    std::size_t n = 0;
    for (const auto& g : generated) n += g.from_pattern;
    return n;
  }
  [[nodiscard]] std::size_t past_aux_bits() const { return generated.size() - pattern_aux_bits(); }
  [[nodiscard]] std::size_t justice_count(Side side) const {
    std::size_t n = 0;
    for (const auto& c : constraints) n += c.side == side && c.kind == ConstraintKind::Justice;
    return n;
  }
};

namespace detail {

inline std::string hint_for(const spec::Constraint& c, std::size_t index) {
  if (c.label) return *c.label;
  std::string id = c.pattern ? spec::to_string(c.pattern->id) : "c";
  std::transform(id.begin(), id.end(), id.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return (c.side == Side::Assumption ? "a" : "g") + std::to_string(index + 1) + "_" + id;
}

}  // namespace detail

/// Typechecks, expands defines, and compiles patterns and past operators
/// away.  Throws spec::SpecError on type errors.
inline NormalizedSpec normalize(const spec::SpecDocument& doc) {
  spec::require_typed(doc);
  NormalizedSpec out;
  out.source = doc;
  out.expanded = spec::expand_defines(doc);

  std::set<std::string> taken;
  for (const auto* v : doc.all_vars()) taken.insert(v->name);
  for (const auto& d : doc.defines) taken.insert(d.name);
  FreshNames fresh(taken);

  auto add_expansion = [&](const TemplateExpansion& t, std::size_t origin, bool from_pattern) {
    for (const auto& v : t.new_aux_vars) out.generated.push_back({v, t.side, origin, from_pattern});
    for (const auto& e : t.initial)
      out.constraints.push_back({t.side, ConstraintKind::Initial, e, origin, Role::Definition});
    for (const auto& e : t.safety)
      out.constraints.push_back({t.side, ConstraintKind::Safety, e, origin, Role::Definition});
    for (const auto& e : t.justice)
      out.constraints.push_back({t.side, ConstraintKind::Justice, e, origin, Role::Body});
  };

  for (Side side : {Side::Assumption, Side::Guarantee}) {
    const auto& list = side == Side::Assumption ? out.expanded.assumptions : out.expanded.guarantees;
    const auto& orig = side == Side::Assumption ? doc.assumptions : doc.guarantees;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const spec::Constraint& c = list[i];
      Origin o;
      o.side = side;
      o.index = i;
      o.label = spec::display_label(c, i);
      o.text = spec::to_string(orig[i]);
      o.kind = c.kind;
      if (c.pattern) o.pattern = c.pattern->id;
      o.aux_definition = spec::is_aux_definition(orig[i], doc);
      o.span = c.span;
      std::size_t oi = out.origins.size();
      out.origins.push_back(o);
      out.monitor_violation.push_back(nullptr);
      Role role = o.aux_definition ? Role::Definition : Role::Body;

      if (c.pattern) {
        PatternInstance inst = *c.pattern;
        for (ExprPtr* param : {&inst.p, &inst.q, &inst.r, &inst.s}) {
          if (!*param || !spec::has_past(*param)) continue;
          auto [e, t] = compile_past(*param, fresh, side);
          *param = e;
          add_expansion(t, oi, false);
        }
        TemplateExpansion t = expand_pattern(inst, fresh, detail::hint_for(c, i));
        add_expansion(t, oi, true);
        out.monitor_violation[oi] = t.violation;
        continue;
      }
      ExprPtr e = c.expr;
      if (spec::has_past(e)) {
        auto [compiled, t] = compile_past(e, fresh, side);
        e = compiled;
        add_expansion(t, oi, false);
      }
      out.constraints.push_back({side, c.kind, e, oi, role});
    }
  }
  return out;
}

/// Declared-constraint breakdown by kind, as reported by `check`.
struct Accounting {
  struct SideCounts {
    std::size_t initial = 0, safety = 0, justice = 0, p09 = 0, p15 = 0, p20 = 0, p26 = 0;
    [[nodiscard]] std::size_t total() const { return initial + safety + justice + p09 + p15 + p20 + p26; }
  };
  SideCounts assumptions, guarantees;
  std::size_t aux_definitions = 0;
  std::size_t env_bits = 0, sys_bits = 0, manual_aux_bits = 0, pattern_aux_bits = 0, past_aux_bits = 0;
  std::size_t env_justice = 0, sys_justice = 0;  // after expansion, before padding
};

inline std::size_t domain_bits(const spec::Domain& d) {
  if (d.is_bool()) return 1;
  std::size_t b = 0;
  while ((std::size_t{1} << b) < d.values.size()) ++b;
  return b;
}

inline Accounting account(const NormalizedSpec& ns) {
  Accounting a;
  for (const auto& o : ns.origins) {
    if (o.aux_definition) {
      ++a.aux_definitions;
      continue;
    }
    auto& s = o.side == Side::Assumption ? a.assumptions : a.guarantees;
    switch (o.kind) {
      case ConstraintKind::Initial: ++s.initial; break;
      case ConstraintKind::Safety: ++s.safety; break;
      case ConstraintKind::Justice: ++s.justice; break;
      case ConstraintKind::Pattern:
        switch (*o.pattern) {
          case PatternId::P09: ++s.p09; break;
          case PatternId::P15: ++s.p15; break;
          case PatternId::P20: ++s.p20; break;
          case PatternId::P26: ++s.p26; break;
        }
        break;
    }
  }
  for (const auto& v : ns.source.env_vars) a.env_bits += domain_bits(v.domain);
  for (const auto& v : ns.source.sys_vars) a.sys_bits += domain_bits(v.domain);
  for (const auto& v : ns.source.aux_vars) a.manual_aux_bits += domain_bits(v.domain);
  a.pattern_aux_bits = ns.pattern_aux_bits();
  a.past_aux_bits = ns.past_aux_bits();
  a.env_justice = ns.justice_count(Side::Assumption);
  a.sys_justice = ns.justice_count(Side::Guarantee);
  return a;
}

}  // namespace gr1::pattern
