#pragma once

#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gr1/strategy/strategy.hpp"

namespace gr1::strategy {

inline constexpr const char* kStrategySchema = "gr1-strategy/1";

namespace detail {

inline nlohmann::json annotation_json(const Annotation& a) {
  return {{"kind", reason_name(a.kind)}, {"index", a.index}, {"constraint_label", a.label}};
}

inline Annotation annotation_from(const nlohmann::json& j) {
  auto kind = parse_reason(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown annotation kind '" + j.at("kind").get<std::string>() + "'");
  return {*kind, j.value("index", std::size_t{0}), j.value("constraint_label", std::string{})};
}

inline nlohmann::json value_json(const Strategy& s, std::size_t var, int v) {
  if (s.vars[var].values.empty()) return v != 0;
  return s.value_name(var, v);
}

inline int value_from(const Strategy& s, std::size_t var, const nlohmann::json& j) {
  const auto& d = s.vars[var].values;
  if (d.empty()) {
    if (!j.is_boolean()) throw std::runtime_error("expected boolean for " + s.vars[var].name);
    return j.get<bool>() ? 1 : 0;
  }
  std::string name = j.get<std::string>();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] == name) return static_cast<int>(i);
  throw std::runtime_error("'" + name + "' is not a value of " + s.vars[var].name);
}

inline nlohmann::json vars_json(const Strategy& s, const std::vector<std::size_t>& which, const Assignment& a) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t k = 0; k < which.size(); ++k) out[s.vars[which[k]].name] = value_json(s, which[k], a[k]);
  return out;
}

inline Assignment vars_from(const Strategy& s, const std::vector<std::size_t>& which, const nlohmann::json& j) {
  Assignment a;
  for (std::size_t v : which) a.push_back(value_from(s, v, j.at(s.vars[v].name)));
  return a;
}

inline std::vector<std::size_t> all_indices(const Strategy& s) {
  std::vector<std::size_t> out(s.vars.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

inline std::vector<std::size_t> env_indices(const Strategy& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.vars.size(); ++i)
    if (s.vars[i].env) out.push_back(i);
  return out;
}

}  // namespace detail

inline nlohmann::json state_json(const Strategy& s, std::size_t id) {
  const auto& st = s.states[id];
  nlohmann::json mem = nlohmann::json::object();
  for (std::size_t k = 0; k < st.memory.size() && k < s.memory_names.size(); ++k) mem[s.memory_names[k]] = st.memory[k];
  nlohmann::json out{{"id", id}, {"assignment", detail::vars_json(s, detail::all_indices(s), st.assignment)}, {"memory", mem}};
  if (st.annotation) out["annotation"] = detail::annotation_json(*st.annotation);
  if (st.env_move) out["env_move"] = detail::vars_json(s, detail::env_indices(s), *st.env_move);
  return out;
}

inline nlohmann::json transition_json(const Strategy& s, const Transition& t) {
  return {{"from", t.from},
          {"input", detail::vars_json(s, s.input_vars(), t.input)},
          {"to", t.to},
          {"annotation", detail::annotation_json(t.annotation)}};
}

inline nlohmann::json to_json(const Strategy& s) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : s.vars) {
    nlohmann::json d = v.values.empty() ? nlohmann::json("boolean") : nlohmann::json(v.values);
    vars.push_back({{"name", v.name}, {"owner", v.env ? "env" : "sys"}, {"aux", v.aux}, {"domain", d}});
  }
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t i = 0; i < s.states.size(); ++i) states.push_back(state_json(s, i));
  nlohmann::json transitions = nlohmann::json::array();
  for (const auto& t : s.transitions) transitions.push_back(transition_json(s, t));
  return {{"schema", kStrategySchema},
          {"kind", s.is_controller() ? "controller" : "counterstrategy"},
          {"spec", s.spec_name},
          {"variables", vars},
          {"memory", s.memory_names},
          {"states", states},
          {"initial", s.initial},
          {"transitions", transitions}};
}

inline Strategy from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string{}) != kStrategySchema)
    throw std::runtime_error("unsupported strategy schema '" + j.value("schema", std::string{}) + "'");
  Strategy s;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "controller") s.kind = Strategy::Kind::Controller;
  else if (kind == "counterstrategy") s.kind = Strategy::Kind::CounterStrategy;
  else throw std::runtime_error("unknown strategy kind '" + kind + "'");
  s.spec_name = j.value("spec", std::string{});
  for (const auto& v : j.at("variables")) {
    VarInfo info{v.at("name").get<std::string>(), v.at("owner").get<std::string>() == "env", v.value("aux", false), {}};
    if (v.at("domain").is_array()) info.values = v.at("domain").get<std::vector<std::string>>();
    s.vars.push_back(std::move(info));
  }
  s.memory_names = j.at("memory").get<std::vector<std::string>>();
  auto all = detail::all_indices(s);
  auto env = detail::env_indices(s);
  for (const auto& st : j.at("states")) {
    if (st.at("id").get<std::size_t>() != s.states.size()) throw std::runtime_error("state ids must be consecutive");
    StrategyState out;
    out.assignment = detail::vars_from(s, all, st.at("assignment"));
    for (const auto& name : s.memory_names) out.memory.push_back(st.at("memory").at(name).get<int>());
    if (st.contains("annotation")) out.annotation = detail::annotation_from(st.at("annotation"));
    if (st.contains("env_move")) out.env_move = detail::vars_from(s, env, st.at("env_move"));
    s.states.push_back(std::move(out));
  }
  s.initial = j.at("initial").get<std::vector<std::size_t>>();
  auto in_vars = s.input_vars();
  for (const auto& t : j.at("transitions")) {
    Transition tr{t.at("from").get<std::size_t>(), t.at("to").get<std::size_t>(),
                  detail::vars_from(s, in_vars, t.at("input")), detail::annotation_from(t.at("annotation"))};
    if (tr.from >= s.states.size() || tr.to >= s.states.size()) throw std::runtime_error("transition refers to an unknown state");
    s.transitions.push_back(std::move(tr));
  }
  for (std::size_t i : s.initial)
    if (i >= s.states.size()) throw std::runtime_error("initial state out of range");
  return s;
}

/// Graphviz rendering; edges carry the annotation as label and one style
/// per annotation kind.
inline std::string to_dot(const Strategy& s) {
  static const std::map<ReasonKind, std::string> color = {
      {ReasonKind::GoalSatisfied, "darkgreen"},  {ReasonKind::ApproachGoal, "blue"},
      {ReasonKind::PreventEnvJustice, "red"},    {ReasonKind::Descend, "purple"},
      {ReasonKind::SatisfyEnvJustice, "orange"}, {ReasonKind::ApproachEnvJustice, "brown"}};
  auto esc = [](const std::string& t) {
    std::string out;
    for (char c : t) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::ostringstream os;
  os << "digraph \"" << esc(s.spec_name) << "\" {\n  node [shape=box, fontsize=9];\n";
  os << "  init [shape=point];\n";
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const auto& st = s.states[i];
    std::string label = "#" + std::to_string(i);
    for (std::size_t k = 0; k < st.memory.size() && k < s.memory_names.size(); ++k)
      label += " " + s.memory_names[k] + "=" + std::to_string(st.memory[k]);
    label += "\\n" + esc(s.format(st.assignment));
    if (st.annotation) label += "\\n" + std::string(reason_name(st.annotation->kind)) + " " + esc(st.annotation->label);
    os << "  s" << i << " [label=\"" << label << "\"];\n";
  }
  for (std::size_t i : s.initial) os << "  init -> s" << i << ";\n";
  auto in_vars = s.input_vars();
  for (const auto& t : s.transitions) {
    std::string input;
    for (std::size_t k = 0; k < in_vars.size(); ++k)
      input += (k ? " " : "") + s.vars[in_vars[k]].name + "=" + s.value_name(in_vars[k], t.input[k]);
    const char* kind = reason_name(t.annotation.kind);
    auto c = color.find(t.annotation.kind);
    os << "  s" << t.from << " -> s" << t.to << " [class=\"" << kind << "\", color=" << (c == color.end() ? "black" : c->second)
       << ", label=\"" << kind << "(" << esc(t.annotation.label) << ")\\n" << esc(input) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gr1::strategy
