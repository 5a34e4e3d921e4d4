#pragma once

#include <json.hpp>

#include "gr1/spec/ast.hpp"
#include "gr1/spec/printer.hpp"

namespace gr1::spec {

inline nlohmann::json span_to_json(const SourceSpan& s) {
  return {{"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

inline const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::BoolConst: return "bool";
    case ExprKind::Ident: return "ident";
    case ExprKind::Not: return "not";
    case ExprKind::And: return "and";
    case ExprKind::Or: return "or";
    case ExprKind::Imp: return "implies";
    case ExprKind::Iff: return "iff";
    case ExprKind::Eq: return "eq";
    case ExprKind::Neq: return "neq";
    case ExprKind::Next: return "next";
    case ExprKind::Prev: return "prev";
    case ExprKind::Since: return "since";
    case ExprKind::Once: return "once";
    case ExprKind::Historically: return "historically";
  }
  return "?";
}

inline nlohmann::json expr_to_json(const ExprPtr& e) {
  if (!e) return nullptr;
  nlohmann::json j = {{"op", kind_name(e->kind)}};
  if (e->kind == ExprKind::BoolConst) j["value"] = e->value;
  if (e->kind == ExprKind::Ident) j["name"] = e->name;
  if (!e->args.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& a : e->args) j["args"].push_back(expr_to_json(a));
  }
  return j;
}

inline nlohmann::json constraint_to_json(const Constraint& c, std::size_t index) {
  nlohmann::json j = {{"label", display_label(c, index)},
                      {"side", to_string(c.side)},
                      {"kind", to_string(c.kind)},
                      {"text", to_string(c)},
                      {"span", span_to_json(c.span)}};
  if (c.expr) j["expr"] = expr_to_json(c.expr);
  if (c.pattern) {
    const PatternInstance& p = *c.pattern;
    nlohmann::json pj = {{"id", to_string(p.id)}};
    for (auto [name, e] : {std::pair{"p", p.p}, std::pair{"q", p.q}, std::pair{"r", p.r},
                           std::pair{"s", p.s}})
      if (e) pj[name] = expr_to_json(e);
    if (p.id == PatternId::P15) pj["bound"] = p.bound;
    j["pattern"] = pj;
  }
  return j;
}

/// Machine-readable dump of a parsed document.
inline nlohmann::json document_to_json(const SpecDocument& doc) {
  nlohmann::json j = {{"schema", "gr1-ast/1"}, {"name", doc.name}};
  auto vars = [](const std::vector<VarDecl>& list) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : list) {
      nlohmann::json d = {{"name", v.name}};
      if (v.domain.is_bool())
        d["type"] = "boolean";
      else
        d["type"] = v.domain.values;
      a.push_back(d);
    }
    return a;
  };
  j["env_vars"] = vars(doc.env_vars);
  j["sys_vars"] = vars(doc.sys_vars);
  j["aux_vars"] = vars(doc.aux_vars);
  j["defines"] = nlohmann::json::array();
  for (const auto& d : doc.defines) j["defines"].push_back({{"name", d.name}, {"body", expr_to_json(d.body)}});
  j["assumptions"] = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.assumptions.size(); ++i)
    j["assumptions"].push_back(constraint_to_json(doc.assumptions[i], i));
  j["guarantees"] = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.guarantees.size(); ++i)
    j["guarantees"].push_back(constraint_to_json(doc.guarantees[i], i));
  return j;
}

}  // namespace gr1::spec
