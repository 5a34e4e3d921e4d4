#pragma once

#include <utility>

#include "gr1/pattern/templates.hpp"

namespace gr1::pattern {

/// Replaces every past subformula by a fresh boolean aux variable, innermost
/// first.  PREV(f): initially false, next value f.  p SINCE q: initially q,
/// next value next(q) | next(p) & aux.  ONCE(q) is TRUE SINCE q and
/// HISTORICALLY(q) is !ONCE(!q).
inline std::pair<ExprPtr, TemplateExpansion> compile_past(const ExprPtr& e, FreshNames& fresh,
                                                          Side side) {
  using namespace ex;
  TemplateExpansion out;
  out.side = side;
  if (e) out.attributed_to = e->span;
  auto since = [&](const ExprPtr& p, const ExprPtr& q, const char* hint) {
    std::string a = fresh.make(hint);
    out.new_aux_vars.push_back(detail::bool_aux(a));
    out.initial.push_back(iff(ident(a), q));
    ExprPtr keep = p->kind == spec::ExprKind::BoolConst && p->value ? ident(a) : land(next(p), ident(a));
    out.safety.push_back(iff(next(ident(a)), lor(next(q), keep)));
    return ident(a);
  };
  ExprPtr result = spec::rewrite(e, [&](const ExprPtr& n) -> ExprPtr {
    switch (n->kind) {
      case spec::ExprKind::Prev: {
        std::string a = fresh.make("prev");
        out.new_aux_vars.push_back(detail::bool_aux(a));
        out.initial.push_back(lnot(ident(a)));
        out.safety.push_back(iff(next(ident(a)), n->args[0]));
        return ident(a);
      }
      case spec::ExprKind::Since: return since(n->args[0], n->args[1], "since");
      case spec::ExprKind::Once: return since(boolean(true), n->args[0], "once");
      case spec::ExprKind::Historically:
        return lnot(since(boolean(true), lnot(n->args[0]), "hist"));
      default: return nullptr;
    }
  });
  return {result, out};
}

}  // namespace gr1::pattern
